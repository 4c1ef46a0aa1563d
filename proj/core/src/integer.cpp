#include "toral/integer.hpp"

#include <algorithm>

namespace toral {

Integer gcd(const Integer& a, const Integer& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

Integer lcm(const Integer& a, const Integer& b) {
  Integer l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

Integer content(const IntVector& v) {
  Integer g = 0;
  for (const auto& x : v) g = gcd(g, x);
  return g;
}

Integer dot(const IntVector& a, const IntVector& b) {
  Integer s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Integer norm_sq(const IntVector& v) { return dot(v, v); }

bool is_zero(const IntVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Integer& x) { return x == 0; });
}

IntVector negated(IntVector v) {
  for (auto& x : v) x = -x;
  return v;
}

IntVector primitive_canonical(IntVector v) {
  Integer g = content(v);
  if (g == 0) return v;
  for (auto& x : v) x /= g;
  for (const auto& x : v) {
    if (x == 0) continue;
    if (x < 0) v = negated(std::move(v));
    break;
  }
  return v;
}

bool norm_lex_less(const IntVector& a, const IntVector& b) {
  Integer na = norm_sq(a), nb = norm_sq(b);
  if (na != nb) return na < nb;
  return a < b;
}

std::string to_string(const Integer& z) { return z.get_str(); }

std::string to_string(const Rational& q) { return q.get_str(); }

std::string to_string(const IntVector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += v[i].get_str();
  }
  return s + ")";
}

}  // namespace toral
