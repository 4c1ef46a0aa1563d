#pragma once

#include <cstddef>
#include <vector>

#include "toral/integer.hpp"
#include "toral/lattice.hpp"

namespace toral {

/// A closed connected subgroup of T^n, stored as the saturated lattice
/// W cap Z^n of its rational subspace W. Rank 0 is the trivial subgroup,
/// rank n the whole torus.
class Subtorus {
 public:
  /// Throws InputError(NonCanonical) if the lattice is not saturated.
  explicit Subtorus(Lattice lattice);
  static Subtorus trivial(std::size_t n) { return Subtorus(Lattice(n)); }
  static Subtorus full(std::size_t n) { return Subtorus(Lattice::full(n)); }

  std::size_t ambient_dim() const { return lat_.ambient_dim(); }
  std::size_t dim() const { return lat_.rank(); }
  const Lattice& lattice() const { return lat_; }
  bool is_trivial() const { return dim() == 0; }
  bool is_full() const { return dim() == ambient_dim(); }

  friend bool operator==(const Subtorus& a, const Subtorus& b) = default;
  friend bool operator<(const Subtorus& a, const Subtorus& b) { return a.lat_ < b.lat_; }

 private:
  Lattice lat_;
};

/// A character of T^n with coprime entries and first nonzero entry positive.
class PrimitiveCovector {
 public:
  /// Canonicalises any nonzero integer vector (divides by content, fixes sign).
  static PrimitiveCovector canonical(IntVector v);
  /// Accepts only vectors already in canonical form.
  explicit PrimitiveCovector(IntVector v);

  std::size_t ambient_dim() const { return v_.size(); }
  const IntVector& values() const { return v_; }

  friend bool operator==(const PrimitiveCovector& a, const PrimitiveCovector& b) = default;
  friend bool operator<(const PrimitiveCovector& a, const PrimitiveCovector& b) { return norm_lex_less(a.v_, b.v_); }

 private:
  struct Trusted {};
  PrimitiveCovector(IntVector v, Trusted) : v_(std::move(v)) {}
  IntVector v_;
};

/// pi(W) for W the real span of the generators.
Subtorus subtorus_from_generators(const std::vector<IntVector>& generators, std::size_t ambient_dim);

/// Characters vanishing on H; saturated, rank n - dim(H).
Lattice annihilator(const Subtorus& h);
/// The subtorus whose lattice is the joint kernel of the given characters.
Subtorus annihilated_by(const Lattice& characters);

PrimitiveCovector hyperplane_to_covector(const Subtorus& h);
Subtorus covector_to_hyperplane(const PrimitiveCovector& gamma);

/// True iff inner is a subgroup of outer.
bool contains(const Subtorus& outer, const Subtorus& inner);

/// Canonical primitive covectors with squared norm <= max_norm_sq, sorted by
/// (squared norm, lexicographic).
std::vector<PrimitiveCovector> covectors_up_to(std::size_t n, const Integer& max_norm_sq);

/// Every subtorus of the given dimension (0 < dim < n) whose annihilator is
/// spanned by characters of squared norm <= max_norm_sq, sorted. For
/// dim = n - 1 these are the hyperplanes of the covectors above.
std::vector<Subtorus> subtori_with_dual_norm(std::size_t n, std::size_t dim, const Integer& max_norm_sq);

}  // namespace toral
