#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "toral/int_matrix.hpp"
#include "toral/integer.hpp"

namespace toral {

/// Dense integer polynomial, coefficients in ascending degree order. The
/// zero polynomial has no coefficients; otherwise the leading coefficient is
/// nonzero.
class IntPolynomial {
 public:
  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<Integer> ascending);
  IntPolynomial(std::initializer_list<long> ascending);
  static IntPolynomial monomial(std::size_t degree, Integer coeff = 1);

  bool is_zero() const { return c_.empty(); }
  /// Degree; -1 for the zero polynomial.
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  const std::vector<Integer>& coefficients() const { return c_; }
  Integer coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Integer(0); }
  const Integer& leading() const { return c_.back(); }

  Integer evaluate(const Integer& x) const;
  IntMatrix evaluate(const IntMatrix& m) const;
  IntPolynomial negated() const;

  friend IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b);
  friend IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b);
  friend IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b);
  friend bool operator==(const IntPolynomial& a, const IntPolynomial& b) = default;
  friend bool operator<(const IntPolynomial& a, const IntPolynomial& b);

  std::string to_string() const;

 private:
  void trim();
  std::vector<Integer> c_;
};

/// Exact quotient when `divisor` divides `p` in Z[x] and the divisor is monic
/// up to sign; nullopt otherwise.
std::optional<IntPolynomial> divide_exact(const IntPolynomial& p, const IntPolynomial& divisor);

/// det(x I - M), computed with the Faddeev-LeVerrier recurrence (all
/// divisions exact over Z).
IntPolynomial char_poly(const IntMatrix& m);
IntPolynomial char_poly(const UnimodularMatrix& t);

/// The m-th cyclotomic polynomial.
IntPolynomial cyclotomic(unsigned long m);
unsigned long euler_phi(unsigned long m);

/// Orders m with phi(m) <= max_degree, ascending.
std::vector<unsigned long> cyclotomic_orders_up_to_degree(std::size_t max_degree);

/// Order m such that p equals the m-th cyclotomic polynomial, if any.
std::optional<unsigned long> cyclotomic_order(const IntPolynomial& p);

struct Factor {
  IntPolynomial poly;
  std::size_t multiplicity;
  friend bool operator==(const Factor&, const Factor&) = default;
};

/// Irreducible factorisation over Q of a polynomial that is monic up to sign.
/// Factors are monic, sorted by (degree, coefficients); their product with
/// multiplicity equals p up to sign. Cyclotomic factors are split off by
/// trial division, linear factors by the rational root test, and the rest by
/// Kronecker interpolation.
std::vector<Factor> rational_factors(const IntPolynomial& p);

struct CyclotomicVerdict {
  bool all_cyclotomic = false;
  /// Orders of cyclotomic factors, one entry per factor occurrence, ascending.
  std::vector<unsigned long> orders;
  /// First non-cyclotomic irreducible factor when all_cyclotomic is false.
  std::optional<IntPolynomial> refusal;
};
CyclotomicVerdict is_product_of_cyclotomics(const IntPolynomial& p);

/// lcm of the orders of every cyclotomic factor of p (1 when there is none).
/// Any T-periodic hyperplane has period dividing this value.
Integer cyclotomic_lcm(const IntPolynomial& p);

/// lcm of all m with phi(m) <= n; every finite-order element of GL(n, Z)
/// satisfies T^bound = Id.
Integer finite_order_exponent_bound(std::size_t n);

/// Smallest m >= 1 with T^m = Id, or nullopt when the order is infinite.
std::optional<Integer> matrix_order(const UnimodularMatrix& t);

}  // namespace toral
