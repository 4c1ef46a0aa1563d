#pragma once

#include <cstddef>
#include <vector>

#include "toral/int_matrix.hpp"
#include "toral/integer.hpp"

namespace toral {

/// A sublattice of Z^n held by its canonical row-style Hermite normal form:
/// pivot columns strictly increase, pivots are positive, and the entries
/// above each pivot lie in [0, pivot). Two lattices are equal as sets iff
/// their stored bases are identical.
class Lattice {
 public:
  /// The zero lattice in Z^n.
  explicit Lattice(std::size_t ambient_dim);

  /// Accepts a basis only if it is already canonical; throws
  /// InputError(NonCanonical) otherwise.
  static Lattice from_canonical(std::size_t ambient_dim, std::vector<IntVector> basis);
  static Lattice full(std::size_t ambient_dim);

  std::size_t ambient_dim() const { return n_; }
  std::size_t rank() const { return basis_.size(); }
  const std::vector<IntVector>& basis() const { return basis_; }
  /// Column index of the leading entry of each basis row.
  std::vector<std::size_t> pivots() const;

  bool contains(const IntVector& v) const;
  bool contains(const Lattice& other) const;

  friend bool operator==(const Lattice& a, const Lattice& b) = default;
  friend bool operator<(const Lattice& a, const Lattice& b);

 private:
  Lattice(std::size_t n, std::vector<IntVector> basis, int) : n_(n), basis_(std::move(basis)) {}
  friend Lattice hnf(const std::vector<IntVector>& rows, std::size_t ambient_dim);

  std::size_t n_;
  std::vector<IntVector> basis_;
};

/// Canonical HNF basis of the Z-span of the rows.
Lattice hnf(const std::vector<IntVector>& rows, std::size_t ambient_dim);
Lattice hnf(const IntMatrix& m);

/// Row HNF together with a unimodular transform: transform * input = reduced,
/// where the first `rank` rows of `reduced` are the canonical basis and the
/// remaining rows are zero.
struct HnfWithTransform {
  std::vector<IntVector> reduced;
  IntMatrix transform;
  std::size_t rank;
};
HnfWithTransform hnf_with_transform(const std::vector<IntVector>& rows, std::size_t ambient_dim);

/// {x in Z^n : r . x = 0 for every row r}; always saturated.
Lattice integer_kernel(const std::vector<IntVector>& rows, std::size_t ambient_dim);

/// {v in Z^n : c v in span(L) for some nonzero integer c}.
Lattice saturate(const Lattice& lattice);
bool is_saturated(const Lattice& lattice);

/// Rank over Q of a list of integer vectors.
std::size_t rank_of(const std::vector<IntVector>& rows, std::size_t ambient_dim);

}  // namespace toral
