#include "toral/int_matrix.hpp"

#include <algorithm>
#include <stdexcept>

#include "toral/errors.hpp"

namespace toral {

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {
  if (rows == 0 || cols == 0) throw InputError(InputError::Kind::Malformed, "matrix must have at least one row and column");
}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows)
    : IntMatrix(rows.size(), rows.size() ? rows.begin()->size() : 0) {
  std::size_t i = 0;
  for (const auto& r : rows) {
    if (r.size() != cols_) throw InputError(InputError::Kind::Malformed, "ragged matrix literal");
    std::size_t j = 0;
    for (long x : r) (*this)(i, j++) = x;
    ++i;
  }
}

IntMatrix IntMatrix::from_rows(const std::vector<IntVector>& rows) {
  if (rows.empty() || rows.front().empty()) throw InputError(InputError::Kind::Malformed, "matrix must have at least one row and column");
  IntMatrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols_) throw InputError(InputError::Kind::Malformed, "ragged matrix rows");
    for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntVector IntMatrix::row(std::size_t i) const {
  return IntVector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                   data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

IntVector IntMatrix::col(std::size_t j) const {
  IntVector c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

std::vector<IntVector> IntMatrix::row_vectors() const {
  std::vector<IntVector> out;
  out.reserve(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out.push_back(row(i));
  return out;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

IntVector IntMatrix::apply(const IntVector& v) const {
  if (v.size() != cols_) throw InputError(InputError::Kind::DimensionMismatch, "matrix-vector dimension mismatch");
  IntVector out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    Integer s = 0;
    for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * v[j];
    out[i] = std::move(s);
  }
  return out;
}

bool IntMatrix::is_identity() const {
  if (!is_square()) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if ((*this)(i, j) != (i == j ? 1 : 0)) return false;
  return true;
}

bool IntMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Integer& x) { return x == 0; });
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols_ != b.rows_) throw InputError(InputError::Kind::DimensionMismatch, "matrix product dimension mismatch");
  IntMatrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Integer& aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw InputError(InputError::Kind::DimensionMismatch, "matrix sum dimension mismatch");
  IntMatrix c = a;
  for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] += b.data_[i];
  return c;
}

IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw InputError(InputError::Kind::DimensionMismatch, "matrix difference dimension mismatch");
  IntMatrix c = a;
  for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] -= b.data_[i];
  return c;
}

bool operator<(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows_ != b.rows_) return a.rows_ < b.rows_;
  if (a.cols_ != b.cols_) return a.cols_ < b.cols_;
  return a.data_ < b.data_;
}

Integer determinant(const IntMatrix& m) {
  if (!m.is_square()) throw InputError(InputError::Kind::DimensionMismatch, "determinant of non-square matrix");
  const std::size_t n = m.rows();
  IntMatrix a = m;
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer t = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        a(i, j) = std::move(t);
      }
      a(i, k) = 0;
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

IntMatrix power(const IntMatrix& m, unsigned long exponent) {
  IntMatrix result = IntMatrix::identity(m.rows());
  IntMatrix base = m;
  while (exponent) {
    if (exponent & 1UL) result = result * base;
    exponent >>= 1;
    if (exponent) base = base * base;
  }
  return result;
}

IntMatrix power(const IntMatrix& m, const Integer& exponent) {
  if (exponent < 0) throw InputError(InputError::Kind::Precondition, "negative exponent for a general integer matrix");
  if (!exponent.fits_ulong_p()) throw InputError(InputError::Kind::Precondition, "exponent too large");
  return power(m, exponent.get_ui());
}

std::optional<IntMatrix> integer_inverse(const IntMatrix& m) {
  if (!m.is_square()) return std::nullopt;
  const std::size_t n = m.rows();
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(2 * n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = m(i, j);
    a[i][n + i] = 1;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return std::nullopt;
    std::swap(a[p], a[c]);
    Rational inv = 1 / a[c][c];
    for (auto& x : a[c]) x *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || a[i][c] == 0) continue;
      Rational f = a[i][c];
      for (std::size_t j = 0; j < 2 * n; ++j) a[i][j] -= f * a[c][j];
    }
  }
  IntMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Rational& x = a[i][n + j];
      if (x.get_den() != 1) return std::nullopt;
      inv(i, j) = x.get_num();
    }
  return inv;
}

UnimodularMatrix::UnimodularMatrix(IntMatrix m) : m_(std::move(m)), det_(0) {
  if (!m_.is_square()) throw InputError(InputError::Kind::DimensionMismatch, "automorphism matrix must be square");
  Integer d = determinant(m_);
  if (d != 1 && d != -1)
    throw InputError(InputError::Kind::NotUnimodular, "matrix is not unimodular (determinant " + d.get_str() + ")");
  det_ = static_cast<int>(d.get_si());
}

UnimodularMatrix::UnimodularMatrix(std::initializer_list<std::initializer_list<long>> rows)
    : UnimodularMatrix(IntMatrix(rows)) {}

UnimodularMatrix UnimodularMatrix::identity(std::size_t n) { return UnimodularMatrix(IntMatrix::identity(n), 1); }

UnimodularMatrix UnimodularMatrix::inverse() const {
  auto inv = integer_inverse(m_);
  if (!inv) throw std::logic_error("unimodular matrix without integral inverse");
  return UnimodularMatrix(std::move(*inv), det_);
}

UnimodularMatrix UnimodularMatrix::transpose() const { return UnimodularMatrix(m_.transpose(), det_); }

UnimodularMatrix UnimodularMatrix::pow(long exponent) const {
  if (exponent < 0) return inverse().pow(-exponent);
  int d = (exponent % 2 == 0) ? 1 : det_;
  return UnimodularMatrix(power(m_, static_cast<unsigned long>(exponent)), d);
}

UnimodularMatrix operator*(const UnimodularMatrix& a, const UnimodularMatrix& b) {
  return UnimodularMatrix(a.m_ * b.m_, a.det_ * b.det_);
}

namespace {

void subsets(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
             std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    subsets(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace

IntMatrix exterior_power(const IntMatrix& m, std::size_t k) {
  if (!m.is_square() || k == 0 || k > m.rows())
    throw InputError(InputError::Kind::Precondition, "exterior power needs a square matrix and 1 <= k <= n");
  std::vector<std::vector<std::size_t>> idx;
  std::vector<std::size_t> cur;
  subsets(m.rows(), k, 0, cur, idx);
  IntMatrix out(idx.size(), idx.size());
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = 0; b < idx.size(); ++b) {
      IntMatrix minor(k, k);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) minor(i, j) = m(idx[a][i], idx[b][j]);
      out(a, b) = determinant(minor);
    }
  return out;
}

}  // namespace toral
