#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "toral/dynamics.hpp"
#include "toral/metric.hpp"

namespace toral {

/// Limits shared by every search in this module. Running out of budget gives
/// an incomplete result, never an unsound one.
struct Budget {
  Integer max_norm = 32;             // Euclidean norm cap on candidate covectors
  long max_window = 400;             // orbit window radius cap
  std::size_t max_candidates = 100000;
  bool allow_unverified = false;     // accept window-only evidence (marked non-rigorous)
  friend bool operator==(const Budget&, const Budget&) = default;
};

/// Why the orbits of members `first` < `second` are disjoint.
///  - Periodic: both dual orbits are finite and their cycles differ.
///  - Invariant: T^power fixes `functional` u, so |u . gamma| is constant on
///    S^power-orbits; |u . gamma_second| differs from |u . S^r gamma_first|
///    for every 0 <= r < power.
///  - Growth: gamma_second is not +-S^m gamma_first inside the first
///    member's window, and the first member's certified exterior bound
///    exceeds |gamma_second|^2.
///  - WindowOnly: the window scan alone, with no exterior bound.
struct PairEvidence {
  enum class Kind { Periodic, Invariant, Growth, WindowOnly };
  std::size_t first = 0;
  std::size_t second = 0;
  Kind kind = Kind::Periodic;
  IntVector functional;
  Integer power = 0;
  friend bool operator==(const PairEvidence&, const PairEvidence&) = default;
};

enum class FamilyBranch { FiniteOrder, Distal, Reducible, Irreducible };

struct DisjointFamilyCertificate {
  UnimodularMatrix automorphism = UnimodularMatrix::identity(1);
  std::size_t requested = 0;
  FamilyBranch branch = FamilyBranch::FiniteOrder;
  std::vector<Subtorus> family;
  std::vector<PrimitiveCovector> covectors;
  std::vector<OrbitReport> reports;
  std::vector<PairEvidence> pairs;
  /// Distal branch: the power whose dual action is unipotent.
  Integer unipotent_power = 1;
  /// Reducible branch: the S-invariant saturated lattice the candidates were
  /// drawn from (kernel of g(S) for a non-cyclotomic factor g).
  std::optional<Lattice> induction_lattice;
  bool complete = false;
  bool rigorous = true;
  std::string note;
  friend bool operator==(const DisjointFamilyCertificate&, const DisjointFamilyCertificate&) = default;
};

const char* to_string(FamilyBranch b);
const char* to_string(PairEvidence::Kind k);

/// Members jg0 + d (j = 1, 2, ...) separated by the invariant u . gamma, where
/// u spans part of ker(T - Id). Throws InputError(Precondition) unless T is
/// unipotent and not the identity.
DisjointFamilyCertificate unipotent_family(const UnimodularMatrix& t, std::size_t count,
                                           const Budget& budget = {});

/// Codimension-1 subtori with pairwise disjoint T-orbits, `count` of them when
/// the budget allows. Dispatches on finite order, distal infinite order, and
/// the presence of a non-cyclotomic factor of the characteristic polynomial.
DisjointFamilyCertificate disjoint_hyperplane_orbits(const UnimodularMatrix& t, std::size_t count,
                                                     const Budget& budget = {});

/// Orbit invariant of a covector under a unipotent T: the values u . gamma for
/// u in ker(S^T - Id), then u' . gamma modulo its drift for u' in
/// ker((S^T - Id)^2), normalised over the sign of gamma. Equal covectors on
/// one S-orbit have equal invariants; for nilpotency index <= 2 the converse
/// holds as well.
std::vector<Integer> unipotent_orbit_invariant(const UnimodularMatrix& t, const PrimitiveCovector& gamma);

struct FixedSubtori {
  std::vector<Subtorus> members;
  /// False when the list was cut off by the norm cap (infinitely many exist,
  /// or k < n - 1 where only the cap is searched).
  bool complete = true;
  bool infinite = false;
};
/// k-dimensional subtori fixed by T. For k = n - 1 these come from the
/// kernels of S -+ Id and are exact; otherwise the search is limited to
/// annihilator norms <= dual_norm_bound.
FixedSubtori fixed_subtori(const UnimodularMatrix& t, std::size_t k, const Integer& dual_norm_bound);

struct NonExpansivityCertificate {
  enum class Branch { FiniteOrder, InfinitelyManyOrbits, Inconclusive };
  UnimodularMatrix automorphism = UnimodularMatrix::identity(1);
  Branch branch = Branch::Inconclusive;
  Integer order = 0;              // FiniteOrder
  std::vector<Subtorus> fixed;    // FiniteOrder: distinct subtori fixed by T^order
  std::optional<DisjointFamilyCertificate> family;
  std::vector<bool> converges;    // per family member
  std::optional<IsolationReport> isolation;
  /// Any finite bound on the number of orbits below this is refuted.
  std::size_t refuted_orbit_bound = 0;
  std::string note;
};

const char* to_string(NonExpansivityCertificate::Branch b);

struct NonExpansivityOptions {
  std::size_t orbit_count = 10;
  std::size_t fixed_count = 2;
  Budget budget;
  Integer isolation_norm = 3;
  double isolation_resolution = 0.05;
  bool with_isolation = true;
};

NonExpansivityCertificate non_expansivity_certificate(const UnimodularMatrix& t,
                                                      const NonExpansivityOptions& options = {});

}  // namespace toral
