#include "toral/lattice.hpp"

#include <utility>

#include "toral/errors.hpp"

namespace toral {

namespace {

void combine_rows(std::vector<IntVector>& a, IntMatrix& u, std::size_t r, std::size_t i, std::size_t c) {
  Integer g, s, t;
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a[r][c].get_mpz_t(), a[i][c].get_mpz_t());
  Integer x = a[r][c] / g;
  Integer y = a[i][c] / g;
  // [s t; -y x] has determinant 1.
  for (std::size_t j = 0; j < a[r].size(); ++j) {
    Integer pr = s * a[r][j] + t * a[i][j];
    Integer pi = x * a[i][j] - y * a[r][j];
    a[r][j] = std::move(pr);
    a[i][j] = std::move(pi);
  }
  for (std::size_t j = 0; j < u.cols(); ++j) {
    Integer pr = s * u(r, j) + t * u(i, j);
    Integer pi = x * u(i, j) - y * u(r, j);
    u(r, j) = std::move(pr);
    u(i, j) = std::move(pi);
  }
}

}  // namespace

Lattice::Lattice(std::size_t ambient_dim) : n_(ambient_dim) {
  if (ambient_dim == 0) throw InputError(InputError::Kind::Precondition, "ambient dimension must be positive");
}

Lattice Lattice::full(std::size_t ambient_dim) { return hnf(IntMatrix::identity(ambient_dim)); }

Lattice Lattice::from_canonical(std::size_t ambient_dim, std::vector<IntVector> basis) {
  for (const auto& r : basis)
    if (r.size() != ambient_dim) throw InputError(InputError::Kind::DimensionMismatch, "lattice basis row has wrong length");
  Lattice l = hnf(basis, ambient_dim);
  if (l.basis_ != basis) throw InputError(InputError::Kind::NonCanonical, "non-canonical basis");
  return l;
}

std::vector<std::size_t> Lattice::pivots() const {
  std::vector<std::size_t> p;
  for (const auto& r : basis_) {
    std::size_t j = 0;
    while (r[j] == 0) ++j;
    p.push_back(j);
  }
  return p;
}

bool Lattice::contains(const IntVector& v) const {
  if (v.size() != n_) throw InputError(InputError::Kind::DimensionMismatch, "vector dimension does not match lattice");
  IntVector w = v;
  auto piv = pivots();
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    const Integer& p = basis_[i][piv[i]];
    if (w[piv[i]] == 0) continue;
    if (!mpz_divisible_p(w[piv[i]].get_mpz_t(), p.get_mpz_t())) return false;
    Integer q = w[piv[i]] / p;
    for (std::size_t j = piv[i]; j < n_; ++j) w[j] -= q * basis_[i][j];
  }
  return is_zero(w);
}

bool Lattice::contains(const Lattice& other) const {
  for (const auto& r : other.basis_)
    if (!contains(r)) return false;
  return true;
}

bool operator<(const Lattice& a, const Lattice& b) {
  if (a.n_ != b.n_) return a.n_ < b.n_;
  return a.basis_ < b.basis_;
}

HnfWithTransform hnf_with_transform(const std::vector<IntVector>& rows, std::size_t ambient_dim) {
  const std::size_t m = rows.size();
  std::vector<IntVector> a = rows;
  for (const auto& r : a)
    if (r.size() != ambient_dim) throw InputError(InputError::Kind::DimensionMismatch, "row length does not match ambient dimension");
  IntMatrix u = IntMatrix::identity(m == 0 ? 1 : m);
  if (m == 0) return {std::move(a), std::move(u), 0};

  std::size_t r = 0;
  for (std::size_t c = 0; c < ambient_dim && r < m; ++c) {
    for (std::size_t i = r + 1; i < m; ++i)
      if (a[i][c] != 0) combine_rows(a, u, r, i, c);
    if (a[r][c] == 0) continue;
    if (a[r][c] < 0) {
      for (auto& x : a[r]) x = -x;
      for (std::size_t j = 0; j < m; ++j) u(r, j) = -u(r, j);
    }
    for (std::size_t i = 0; i < r; ++i) {
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), a[i][c].get_mpz_t(), a[r][c].get_mpz_t());
      if (q == 0) continue;
      for (std::size_t j = c; j < ambient_dim; ++j) a[i][j] -= q * a[r][j];
      for (std::size_t j = 0; j < m; ++j) u(i, j) -= q * u(r, j);
    }
    ++r;
  }
  return {std::move(a), std::move(u), r};
}

Lattice hnf(const std::vector<IntVector>& rows, std::size_t ambient_dim) {
  auto h = hnf_with_transform(rows, ambient_dim);
  h.reduced.resize(h.rank);
  return Lattice(ambient_dim, std::move(h.reduced), 0);
}

Lattice hnf(const IntMatrix& m) { return hnf(m.row_vectors(), m.cols()); }

Lattice integer_kernel(const std::vector<IntVector>& rows, std::size_t ambient_dim) {
  if (rows.empty()) return Lattice::full(ambient_dim);
  // Left kernel of the transpose: U * B^T = H, zero rows of H give kernel rows of U.
  std::vector<IntVector> cols(ambient_dim, IntVector(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != ambient_dim) throw InputError(InputError::Kind::DimensionMismatch, "row length does not match ambient dimension");
    for (std::size_t j = 0; j < ambient_dim; ++j) cols[j][i] = rows[i][j];
  }
  auto h = hnf_with_transform(cols, rows.size());
  std::vector<IntVector> kernel;
  for (std::size_t i = h.rank; i < ambient_dim; ++i) kernel.push_back(h.transform.row(i));
  return hnf(kernel, ambient_dim);
}

Lattice saturate(const Lattice& lattice) {
  const std::size_t n = lattice.ambient_dim();
  if (lattice.rank() == 0) return lattice;
  if (lattice.rank() == n) return Lattice::full(n);
  Lattice ann = integer_kernel(lattice.basis(), n);
  return integer_kernel(ann.basis(), n);
}

bool is_saturated(const Lattice& lattice) { return saturate(lattice) == lattice; }

std::size_t rank_of(const std::vector<IntVector>& rows, std::size_t ambient_dim) {
  return hnf(rows, ambient_dim).rank();
}

}  // namespace toral
