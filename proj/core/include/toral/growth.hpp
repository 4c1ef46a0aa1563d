#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "toral/int_matrix.hpp"
#include "toral/integer.hpp"

namespace toral {

using RationalMatrix = std::vector<std::vector<Rational>>;

enum class Direction { Forward, Backward };

/// Cone certificate for the map A = S (forward) or A = S^{-1} (backward):
/// A^T Q A - mu Q is positive definite and mu > 1. Once Q(v) > 0 along an
/// orbit, Q(A^m v) is increasing, and |v|^2 >= Q(v) / rowsum(Q).
struct LyapunovCertificate {
  Direction direction = Direction::Forward;
  Rational mu;
  RationalMatrix form;
  friend bool operator==(const LyapunovCertificate&, const LyapunovCertificate&) = default;
};

/// Linear drift certificate: with A = sign * S, (A^T - I)^2 f = 0, so
/// |f . S^m g| = |f . g + m d| with d = f . (A - I) g, in both time directions.
struct LinearCertificate {
  IntVector functional;
  int sign = 1;
  friend bool operator==(const LinearCertificate&, const LinearCertificate&) = default;
};

using GrowthCertificate = std::variant<LyapunovCertificate, LinearCertificate>;

Rational quadratic_value(const RationalMatrix& q, const IntVector& v);
/// Max absolute row sum; an upper bound on the largest eigenvalue of q.
Rational row_sum_bound(const RationalMatrix& q);
/// Sylvester's criterion with exact rational arithmetic.
bool is_positive_definite(const RationalMatrix& m);
/// A^T Q A - mu Q for integer A.
RationalMatrix lyapunov_residual(const IntMatrix& a, const RationalMatrix& q, const Rational& mu);
/// Solves A^T Q A - mu Q = I for symmetric Q; nullopt when singular.
std::optional<RationalMatrix> solve_lyapunov(const IntMatrix& a, const Rational& mu);

/// Candidate rates tried when searching for cone certificates, largest first.
const std::vector<Rational>& lyapunov_rates();

/// Lower bound on |S^m g|^2 valid for every |m| > window, derived from the
/// given certificates (the smallest bound over both directions). nullopt if
/// the certificates do not cover both directions or give no positive bound.
std::optional<Rational> exterior_bound(const UnimodularMatrix& s, const IntVector& gamma, long window,
                                       const std::vector<GrowthCertificate>& certs);

struct GrowthSearch {
  long window = 0;
  Rational bound;
  std::vector<GrowthCertificate> certs;
};

/// Smallest window <= max_window whose certified exterior bound exceeds
/// target_norm_sq, trying cone certificates in both directions and a linear
/// drift certificate.
std::optional<GrowthSearch> find_growth_certificate(const UnimodularMatrix& s, const IntVector& gamma,
                                                    const Rational& target_norm_sq, long min_window,
                                                    long max_window);

}  // namespace toral
