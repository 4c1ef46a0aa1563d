#include "toral/subtorus.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "toral/errors.hpp"

namespace toral {

Subtorus::Subtorus(Lattice lattice) : lat_(std::move(lattice)) {
  if (!is_saturated(lat_)) throw InputError(InputError::Kind::NonCanonical, "subtorus lattice is not saturated");
}

PrimitiveCovector PrimitiveCovector::canonical(IntVector v) {
  if (v.empty() || is_zero(v)) throw InputError(InputError::Kind::Precondition, "covector must be nonzero");
  return PrimitiveCovector(primitive_canonical(std::move(v)), Trusted{});
}

PrimitiveCovector::PrimitiveCovector(IntVector v) : v_(std::move(v)) {
  if (v_.empty() || is_zero(v_)) throw InputError(InputError::Kind::Precondition, "covector must be nonzero");
  if (primitive_canonical(v_) != v_) throw InputError(InputError::Kind::NonCanonical, "covector is not primitive with canonical sign");
}

Subtorus subtorus_from_generators(const std::vector<IntVector>& generators, std::size_t ambient_dim) {
  return Subtorus(saturate(hnf(generators, ambient_dim)));
}

Lattice annihilator(const Subtorus& h) { return integer_kernel(h.lattice().basis(), h.ambient_dim()); }

Subtorus annihilated_by(const Lattice& characters) {
  return Subtorus(integer_kernel(characters.basis(), characters.ambient_dim()));
}

PrimitiveCovector hyperplane_to_covector(const Subtorus& h) {
  if (h.dim() + 1 != h.ambient_dim())
    throw InputError(InputError::Kind::Precondition, "hyperplane_to_covector needs a codimension-1 subtorus");
  Lattice ann = annihilator(h);
  return PrimitiveCovector(ann.basis().front());
}

Subtorus covector_to_hyperplane(const PrimitiveCovector& gamma) {
  return Subtorus(integer_kernel({gamma.values()}, gamma.ambient_dim()));
}

bool contains(const Subtorus& outer, const Subtorus& inner) {
  if (outer.ambient_dim() != inner.ambient_dim())
    throw InputError(InputError::Kind::DimensionMismatch, "subtori live in different tori");
  return outer.lattice().contains(inner.lattice());
}

std::vector<PrimitiveCovector> covectors_up_to(std::size_t n, const Integer& max_norm_sq) {
  std::vector<PrimitiveCovector> out;
  Integer bound;
  mpz_sqrt(bound.get_mpz_t(), max_norm_sq.get_mpz_t());
  const long b = bound.get_si();
  IntVector cur(n);
  std::function<void(std::size_t, Integer)> rec = [&](std::size_t i, Integer used) {
    if (i == n) {
      if (is_zero(cur) || content(cur) != 1) return;
      if (primitive_canonical(cur) != cur) return;
      out.push_back(PrimitiveCovector(cur));
      return;
    }
    for (long x = -b; x <= b; ++x) {
      Integer u = used + Integer(x) * x;
      if (u > max_norm_sq) continue;
      cur[i] = x;
      rec(i + 1, u);
    }
    cur[i] = 0;
  };
  rec(0, 0);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Subtorus> subtori_with_dual_norm(std::size_t n, std::size_t dim, const Integer& max_norm_sq) {
  if (dim == 0 || dim >= n) throw InputError(InputError::Kind::Precondition, "enumeration needs 0 < dim < n");
  const std::size_t r = n - dim;
  auto cov = covectors_up_to(n, max_norm_sq);
  std::set<Subtorus> seen;
  std::vector<IntVector> chosen;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (chosen.size() == r) {
      Lattice span = hnf(chosen, n);
      if (span.rank() != r) return;
      seen.insert(annihilated_by(saturate(span)));
      return;
    }
    for (std::size_t i = start; i < cov.size(); ++i) {
      chosen.push_back(cov[i].values());
      if (rank_of(chosen, n) == chosen.size()) rec(i + 1);
      chosen.pop_back();
    }
  };
  rec(0);
  return {seen.begin(), seen.end()};
}

}  // namespace toral
