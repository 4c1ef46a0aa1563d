#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <vector>

#include "toral/integer.hpp"

namespace toral {

/// Dense exact integer matrix, row-major.
class IntMatrix {
 public:
  IntMatrix(std::size_t rows, std::size_t cols);
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows);
  static IntMatrix from_rows(const std::vector<IntVector>& rows);
  static IntMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Integer& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Integer& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  IntVector row(std::size_t i) const;
  IntVector col(std::size_t j) const;
  std::vector<IntVector> row_vectors() const;

  IntMatrix transpose() const;
  IntVector apply(const IntVector& v) const;  // M * v

  bool is_identity() const;
  bool is_zero() const;

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend IntMatrix operator+(const IntMatrix& a, const IntMatrix& b);
  friend IntMatrix operator-(const IntMatrix& a, const IntMatrix& b);
  friend bool operator==(const IntMatrix& a, const IntMatrix& b) = default;
  friend bool operator<(const IntMatrix& a, const IntMatrix& b);

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Integer> data_;
};

/// Fraction-free (Bareiss) determinant.
Integer determinant(const IntMatrix& m);
IntMatrix power(const IntMatrix& m, const Integer& exponent);
IntMatrix power(const IntMatrix& m, unsigned long exponent);

/// Exact inverse over the rationals; nullopt when singular or when the
/// inverse has non-integral entries.
std::optional<IntMatrix> integer_inverse(const IntMatrix& m);

/// An element of GL(n, Z). Construction validates det = +-1.
class UnimodularMatrix {
 public:
  explicit UnimodularMatrix(IntMatrix m);
  UnimodularMatrix(std::initializer_list<std::initializer_list<long>> rows);
  static UnimodularMatrix identity(std::size_t n);

  const IntMatrix& matrix() const { return m_; }
  std::size_t dim() const { return m_.rows(); }
  int det() const { return det_; }

  UnimodularMatrix inverse() const;
  UnimodularMatrix transpose() const;
  UnimodularMatrix pow(long exponent) const;
  IntVector apply(const IntVector& v) const { return m_.apply(v); }
  bool is_identity() const { return m_.is_identity(); }

  friend UnimodularMatrix operator*(const UnimodularMatrix& a, const UnimodularMatrix& b);
  friend bool operator==(const UnimodularMatrix& a, const UnimodularMatrix& b) { return a.m_ == b.m_; }
  friend bool operator<(const UnimodularMatrix& a, const UnimodularMatrix& b) { return a.m_ < b.m_; }

 private:
  UnimodularMatrix(IntMatrix m, int det) : m_(std::move(m)), det_(det) {}
  IntMatrix m_;
  int det_;
};

/// The k-th exterior power: rows and columns indexed by k-subsets in
/// lexicographic order, entries are k x k minors.
IntMatrix exterior_power(const IntMatrix& m, std::size_t k);

}  // namespace toral
