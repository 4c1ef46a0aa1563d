#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "toral/growth.hpp"
#include "toral/int_matrix.hpp"
#include "toral/polynomial.hpp"
#include "toral/subtorus.hpp"

namespace toral {

/// T(H): the subtorus whose lattice is T applied to the lattice of H.
Subtorus act(const UnimodularMatrix& t, const Subtorus& h);

/// S = (T^{-1})^T. For a hyperplane H = ker(gamma), T(H) = ker(S gamma).
UnimodularMatrix dual_matrix(const UnimodularMatrix& t);

/// The dual action on primitive covectors, with the exact period exponent M:
/// a covector is periodic (up to sign) iff S^M gamma = gamma, and its
/// minimal period divides M.
class DualAction {
 public:
  explicit DualAction(const UnimodularMatrix& t);

  const UnimodularMatrix& primal() const { return t_; }
  const UnimodularMatrix& dual() const { return s_; }
  const UnimodularMatrix& dual_inverse() const { return s_inv_; }
  const Integer& period_exponent() const { return period_exponent_; }

  PrimitiveCovector step(const PrimitiveCovector& gamma, long m = 1) const;
  bool is_periodic(const PrimitiveCovector& gamma) const;
  /// Minimal p >= 1 with S^p gamma = +-gamma, or nullopt for injective orbits.
  std::optional<Integer> period(const PrimitiveCovector& gamma) const;

 private:
  UnimodularMatrix t_;
  UnimodularMatrix s_;
  UnimodularMatrix s_inv_;
  Integer period_exponent_;
  IntMatrix s_power_;  // S^M
};

enum class OrbitStatus { Periodic, Injective };

struct OrbitEntry {
  long exponent = 0;
  Subtorus subtorus;
  friend bool operator==(const OrbitEntry&, const OrbitEntry&) = default;
};

/// Exact status of {T^m(H)}. Periodic orbits list the whole cycle
/// (exponents 0..p-1); injective orbits list exponents -w..w. For injective
/// hyperplane orbits, min_exterior_norm_sq bounds |S^m gamma|^2 for every
/// |m| > w, backed by the growth certificates.
struct OrbitReport {
  OrbitStatus status = OrbitStatus::Injective;
  Integer period = 0;
  long window_radius = 0;
  std::vector<OrbitEntry> window;
  std::optional<Rational> min_exterior_norm_sq;
  std::vector<GrowthCertificate> growth;
  friend bool operator==(const OrbitReport&, const OrbitReport&) = default;
};

/// Minimal period of H under T, decided exactly via the cyclotomic part of
/// the characteristic polynomial of the dim(H)-th exterior power.
std::optional<Integer> subtorus_period(const UnimodularMatrix& t, const Subtorus& h);

OrbitReport orbit(const UnimodularMatrix& t, const Subtorus& h, long window_radius);

/// Orbit report for a hyperplane whose window is grown (up to max_window)
/// until the certified exterior bound exceeds target_norm_sq. Injective
/// orbits without such a certificate come back with no exterior bound.
OrbitReport certified_hyperplane_orbit(const DualAction& action, const Subtorus& h, const Rational& target_norm_sq,
                                       long min_window, long max_window);

/// T^m(H) -> T^n as m -> +-infinity, for a codimension-1 H: true iff the dual
/// covector has an injective S-orbit.
bool converges_to_full(const UnimodularMatrix& t, const Subtorus& h);
bool converges_to_full(const DualAction& action, const Subtorus& h);

/// Heuristic for subtori of codimension >= 2: the orbit is not periodic and
/// the shortest annihilator basis row grows from the window centre to both
/// ends. Not a decision procedure.
bool converges_to_full_heuristic(const UnimodularMatrix& t, const Subtorus& h, long window);

struct InvariantSubspaces {
  bool exists = false;
  std::vector<Subtorus> witnesses;
};
/// Proper nonzero T-invariant rational subspaces (as subtori): exists iff the
/// characteristic polynomial is reducible over Q.
InvariantSubspaces invariant_rational_subspaces(const UnimodularMatrix& t);

bool is_distal_linear(const UnimodularMatrix& t);
bool is_ergodic(const UnimodularMatrix& t);

struct DistalityVerdict {
  bool distal = false;
  std::optional<Integer> order;  // nullopt = infinite
  std::optional<Subtorus> witness;
  std::optional<PrimitiveCovector> witness_covector;
  bool witness_converges = false;
  friend bool operator==(const DistalityVerdict&, const DistalityVerdict&) = default;
};
DistalityVerdict acts_distally_on_subp(const UnimodularMatrix& t);

struct GroupFiniteness {
  enum class Kind { Finite, Infinite, Inconclusive };
  Kind kind = Kind::Inconclusive;
  std::size_t order = 0;                   // Finite
  std::vector<UnimodularMatrix> elements;  // Finite, sorted
  std::optional<UnimodularMatrix> witness; // Infinite
  std::size_t explored = 0;
};
/// Breadth-first closure of the generated group, stopping at cap elements.
GroupFiniteness group_is_finite(const std::vector<UnimodularMatrix>& generators, std::size_t cap);

}  // namespace toral
