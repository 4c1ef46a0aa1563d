#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <vector>

namespace toral {

using Integer = mpz_class;
using Rational = mpq_class;

/// Integer row vector. Covectors, lattice rows and orbit points all use this.
using IntVector = std::vector<Integer>;

Integer gcd(const Integer& a, const Integer& b);
Integer lcm(const Integer& a, const Integer& b);
/// Content of a vector; zero for the zero vector.
Integer content(const IntVector& v);

Integer dot(const IntVector& a, const IntVector& b);
/// Squared Euclidean norm.
Integer norm_sq(const IntVector& v);
bool is_zero(const IntVector& v);
IntVector negated(IntVector v);

/// Divides by the content and flips the sign so the first nonzero entry is
/// positive. The zero vector is returned unchanged.
IntVector primitive_canonical(IntVector v);

/// Ordering used by every deterministic enumeration: squared norm, then
/// lexicographic.
bool norm_lex_less(const IntVector& a, const IntVector& b);

std::string to_string(const Integer& z);
std::string to_string(const Rational& q);
std::string to_string(const IntVector& v);

}  // namespace toral
