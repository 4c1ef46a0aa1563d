#include "toral/constructions.hpp"

#include <algorithm>
#include <set>

#include "toral/errors.hpp"

namespace toral {

namespace {

// Primitive covectors in (norm, lex) order, generated shell by shell so that
// small searches do not pay for the whole ball.
class CovectorStream {
 public:
  CovectorStream(std::size_t n, Integer max_norm_sq) : n_(n), max_sq_(std::move(max_norm_sq)) {}

  std::optional<PrimitiveCovector> next() {
    while (pos_ == batch_.size()) {
      if (done_) return std::nullopt;
      Integer lo = cap_;
      cap_ = cap_ == 0 ? Integer(4) : cap_ * 4;
      if (cap_ >= max_sq_) {
        cap_ = max_sq_;
        done_ = true;
      }
      batch_.clear();
      pos_ = 0;
      for (auto& g : covectors_up_to(n_, cap_))
        if (norm_sq(g.values()) > lo) batch_.push_back(std::move(g));
    }
    return batch_[pos_++];
  }

 private:
  std::size_t n_;
  Integer max_sq_;
  Integer cap_ = 0;
  bool done_ = false;
  std::vector<PrimitiveCovector> batch_;
  std::size_t pos_ = 0;
};

bool is_unipotent(const UnimodularMatrix& t) {
  IntPolynomial target{1};
  for (std::size_t i = 0; i < t.dim(); ++i) target = target * IntPolynomial{-1, 1};
  return char_poly(t) == target;
}

IntMatrix minus_identity(const IntMatrix& m) { return m - IntMatrix::identity(m.rows()); }

// Smallest basis row of the lattice in (norm, lex) order.
IntVector smallest_row(const Lattice& l) {
  return *std::min_element(l.basis().begin(), l.basis().end(), norm_lex_less);
}

// The data behind the unipotent construction for U = T^m: a functional u with
// U u = u, a covector g0 with u . g0 = 1 not fixed by the dual of U, and a
// direction d with u . d = 0.
struct UnipotentSeed {
  IntVector u;
  IntVector g0;
  IntVector d;
};

UnipotentSeed unipotent_seed(const UnimodularMatrix& u_mat) {
  const std::size_t n = u_mat.dim();
  const IntMatrix nil = minus_identity(dual_matrix(u_mat).matrix());
  UnipotentSeed seed;
  seed.u = smallest_row(integer_kernel(minus_identity(u_mat.matrix()).row_vectors(), n));
  bool found = false;
  for (Integer cap = 4; !found; cap *= 4) {
    for (const auto& g : covectors_up_to(n, cap)) {
      Integer v = dot(seed.u, g.values());
      if (abs(v) != 1 || is_zero(nil.apply(g.values()))) continue;
      seed.g0 = v == 1 ? g.values() : negated(g.values());
      found = true;
      break;
    }
  }
  const Lattice perp = integer_kernel({seed.u}, n);
  std::vector<IntVector> rows = perp.basis();
  std::sort(rows.begin(), rows.end(), norm_lex_less);
  seed.d = rows.empty() ? IntVector(n) : rows.front();
  return seed;
}

IntVector seed_candidate(const UnipotentSeed& s, long j) {
  if (j == 1) return s.g0;
  IntVector v = s.d;
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += j * s.g0[i];
  return v;
}

std::string budget_note(std::size_t found, std::size_t requested, std::size_t tried) {
  return "budget exhausted: " + std::to_string(found) + " of " + std::to_string(requested) + " members after " +
         std::to_string(tried) + " candidates";
}

// Distal case: T^power = U is unipotent. Members come from the unipotent
// construction for U and are kept only when |u . gamma| avoids the values on
// every S^power-orbit that makes up the T-orbit of an earlier member.
DisjointFamilyCertificate distal_family(const UnimodularMatrix& t, const Integer& exponent, std::size_t count,
                                        const Budget& budget) {
  DisjointFamilyCertificate cert;
  cert.automorphism = t;
  cert.requested = count;
  cert.branch = FamilyBranch::Distal;
  cert.unipotent_power = exponent;

  const UnimodularMatrix u_mat(power(t.matrix(), exponent));
  const UnipotentSeed seed = unipotent_seed(u_mat);
  const IntMatrix nil = minus_identity(dual_matrix(u_mat).matrix());
  const DualAction action(t);
  const long p = exponent.get_si();
  const Integer max_sq = budget.max_norm * budget.max_norm;

  std::vector<std::set<Integer>> values;
  std::size_t tried = 0;
  for (long j = 1; cert.family.size() < count; ++j) {
    if (tried >= budget.max_candidates) break;
    IntVector raw = seed_candidate(seed, j);
    if (norm_sq(raw) > max_sq && j > 1) break;
    ++tried;
    PrimitiveCovector g = PrimitiveCovector::canonical(raw);
    if (is_zero(nil.apply(g.values()))) continue;
    const Integer inv = abs(dot(seed.u, g.values()));
    bool ok = true;
    for (const auto& vs : values)
      if (vs.count(inv)) ok = false;
    if (!ok) continue;

    const std::size_t idx = cert.family.size();
    for (std::size_t i = 0; i < idx; ++i)
      cert.pairs.push_back({i, idx, PairEvidence::Kind::Invariant, seed.u, exponent});
    std::set<Integer> mine;
    IntVector cur = g.values();
    for (long r = 0; r < p; ++r) {
      mine.insert(abs(dot(seed.u, cur)));
      cur = action.dual().apply(cur);
    }
    values.push_back(std::move(mine));
    const Subtorus h = covector_to_hyperplane(g);
    cert.reports.push_back(certified_hyperplane_orbit(action, h, Rational(0), 1, budget.max_window));
    cert.family.push_back(h);
    cert.covectors.push_back(std::move(g));
  }
  cert.complete = cert.family.size() == count;
  if (!cert.complete) cert.note = budget_note(cert.family.size(), count, tried);
  return cert;
}

DisjointFamilyCertificate finite_order_family(const UnimodularMatrix& t, std::size_t count, const Budget& budget) {
  DisjointFamilyCertificate cert;
  cert.automorphism = t;
  cert.requested = count;
  cert.branch = FamilyBranch::FiniteOrder;
  const DualAction action(t);
  std::set<PrimitiveCovector> covered;
  CovectorStream stream(t.dim(), budget.max_norm * budget.max_norm);
  std::size_t tried = 0;
  while (cert.family.size() < count && tried < budget.max_candidates) {
    auto g = stream.next();
    if (!g) break;
    ++tried;
    if (covered.count(*g)) continue;
    const Subtorus h = covector_to_hyperplane(*g);
    OrbitReport rep = certified_hyperplane_orbit(action, h, Rational(0), 0, 0);
    PrimitiveCovector cur = *g;
    for (Integer k = 0; k < rep.period; ++k) {
      covered.insert(cur);
      cur = action.step(cur);
    }
    const std::size_t idx = cert.family.size();
    for (std::size_t i = 0; i < idx; ++i) cert.pairs.push_back({i, idx, PairEvidence::Kind::Periodic, {}, 0});
    cert.reports.push_back(std::move(rep));
    cert.family.push_back(h);
    cert.covectors.push_back(*g);
  }
  cert.complete = cert.family.size() == count;
  if (!cert.complete) cert.note = budget_note(cert.family.size(), count, tried);
  return cert;
}

// Hyperbolic directions: candidates are drawn from the saturated kernel of
// g(S) for a non-cyclotomic irreducible factor g (all of Z^n when the
// characteristic polynomial is irreducible). Each kept member carries a window
// and a growth certificate covering every later, no longer, candidate.
DisjointFamilyCertificate growth_family(const UnimodularMatrix& t, std::size_t count, const Budget& budget) {
  const std::size_t n = t.dim();
  DisjointFamilyCertificate cert;
  cert.automorphism = t;
  cert.requested = count;
  const DualAction action(t);
  const auto factors = rational_factors(char_poly(action.dual()));
  const bool irreducible = factors.size() == 1 && factors.front().multiplicity == 1;
  cert.branch = irreducible ? FamilyBranch::Irreducible : FamilyBranch::Reducible;
  if (!irreducible) {
    for (const auto& f : factors) {
      if (cyclotomic_order(f.poly)) continue;
      cert.induction_lattice = integer_kernel(f.poly.evaluate(action.dual().matrix()).row_vectors(), n);
      break;
    }
  }

  const Integer max_sq = budget.max_norm * budget.max_norm;
  const Rational target(max_sq);
  std::vector<std::set<PrimitiveCovector>> windows;
  std::vector<bool> bounded;
  CovectorStream stream(n, max_sq);
  std::size_t tried = 0;
  bool skipped_uncertified = false;
  while (cert.family.size() < count && tried < budget.max_candidates) {
    auto g = stream.next();
    if (!g) break;
    if (cert.induction_lattice && !cert.induction_lattice->contains(g->values())) continue;
    ++tried;
    if (action.is_periodic(*g)) continue;
    bool fresh = true;
    for (const auto& w : windows)
      if (w.count(*g)) fresh = false;
    if (!fresh) continue;

    const Subtorus h = covector_to_hyperplane(*g);
    OrbitReport rep = certified_hyperplane_orbit(action, h, target, 1, budget.max_window);
    const bool has_bound = rep.min_exterior_norm_sq.has_value();
    if (!has_bound && !budget.allow_unverified) {
      skipped_uncertified = true;
      continue;
    }
    const std::size_t idx = cert.family.size();
    for (std::size_t i = 0; i < idx; ++i) {
      auto kind = bounded[i] ? PairEvidence::Kind::Growth : PairEvidence::Kind::WindowOnly;
      if (!bounded[i]) cert.rigorous = false;
      cert.pairs.push_back({i, idx, kind, {}, 0});
    }
    std::set<PrimitiveCovector> win;
    PrimitiveCovector fwd = *g, bwd = *g;
    win.insert(*g);
    for (long k = 1; k <= rep.window_radius; ++k) {
      fwd = action.step(fwd);
      bwd = action.step(bwd, -1);
      win.insert(fwd);
      win.insert(bwd);
    }
    windows.push_back(std::move(win));
    bounded.push_back(has_bound);
    cert.reports.push_back(std::move(rep));
    cert.family.push_back(h);
    cert.covectors.push_back(*g);
  }
  cert.complete = cert.family.size() == count;
  if (!cert.complete) {
    cert.note = budget_note(cert.family.size(), count, tried);
    if (skipped_uncertified) cert.note += "; some candidates had no growth certificate within the window cap";
  } else if (!cert.rigorous) {
    cert.note = "window-only evidence present; not rigorous";
  }
  return cert;
}

void check_family_args(const UnimodularMatrix& t, std::size_t count) {
  if (t.dim() < 2) throw InputError(InputError::Kind::Precondition, "need n >= 2");
  if (count < 1) throw InputError(InputError::Kind::Precondition, "count must be >= 1");
}

}  // namespace

const char* to_string(FamilyBranch b) {
  switch (b) {
    case FamilyBranch::FiniteOrder: return "finite-order";
    case FamilyBranch::Distal: return "distal";
    case FamilyBranch::Reducible: return "reducible";
    case FamilyBranch::Irreducible: return "irreducible";
  }
  return "";
}

const char* to_string(PairEvidence::Kind k) {
  switch (k) {
    case PairEvidence::Kind::Periodic: return "periodic";
    case PairEvidence::Kind::Invariant: return "invariant";
    case PairEvidence::Kind::Growth: return "growth";
    case PairEvidence::Kind::WindowOnly: return "window-only";
  }
  return "";
}

const char* to_string(NonExpansivityCertificate::Branch b) {
  switch (b) {
    case NonExpansivityCertificate::Branch::FiniteOrder: return "finite-order";
    case NonExpansivityCertificate::Branch::InfinitelyManyOrbits: return "infinitely-many-orbits";
    case NonExpansivityCertificate::Branch::Inconclusive: return "inconclusive";
  }
  return "";
}

DisjointFamilyCertificate unipotent_family(const UnimodularMatrix& t, std::size_t count, const Budget& budget) {
  check_family_args(t, count);
  if (t.matrix().is_identity()) throw InputError(InputError::Kind::Precondition, "identity is excluded");
  if (!is_unipotent(t)) throw InputError(InputError::Kind::Precondition, "matrix is not unipotent");
  return distal_family(t, Integer(1), count, budget);
}

DisjointFamilyCertificate disjoint_hyperplane_orbits(const UnimodularMatrix& t, std::size_t count,
                                                     const Budget& budget) {
  check_family_args(t, count);
  if (matrix_order(t)) return finite_order_family(t, count, budget);
  const IntPolynomial chi = char_poly(t);
  if (is_product_of_cyclotomics(chi).all_cyclotomic) return distal_family(t, cyclotomic_lcm(chi), count, budget);
  return growth_family(t, count, budget);
}

std::vector<Integer> unipotent_orbit_invariant(const UnimodularMatrix& t, const PrimitiveCovector& gamma) {
  const std::size_t n = t.dim();
  if (gamma.ambient_dim() != n) throw InputError(InputError::Kind::DimensionMismatch, "covector dimension mismatch");
  if (!is_unipotent(t)) throw InputError(InputError::Kind::Precondition, "matrix is not unipotent");
  // S^T = T^{-1}, so ker(S^T - Id)^k = ker(T - Id)^k.
  const IntMatrix nt = minus_identity(t.inverse().matrix());
  const Lattice level1 = integer_kernel(nt.row_vectors(), n);
  const Lattice level2 = integer_kernel((nt * nt).row_vectors(), n);
  auto tuple = [&](const IntVector& g) {
    std::vector<Integer> out;
    for (const auto& u : level1.basis()) out.push_back(dot(u, g));
    for (const auto& u : level2.basis()) {
      Integer v = dot(u, g);
      Integer d = abs(dot(nt.apply(u), g));
      if (d != 0) {
        Integer r;
        mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), d.get_mpz_t());
        v = r;
      }
      out.push_back(v);
    }
    return out;
  };
  return std::max(tuple(gamma.values()), tuple(negated(gamma.values())));
}

FixedSubtori fixed_subtori(const UnimodularMatrix& t, std::size_t k, const Integer& dual_norm_bound) {
  const std::size_t n = t.dim();
  if (k < 1 || k + 1 > n) throw InputError(InputError::Kind::Precondition, "need 1 <= k <= n - 1");
  FixedSubtori out;
  std::set<Subtorus> found;
  if (k + 1 == n) {
    const IntMatrix s = dual_matrix(t).matrix();
    for (int sign : {1, -1}) {
      IntMatrix m = sign > 0 ? s - IntMatrix::identity(n) : s + IntMatrix::identity(n);
      Lattice ker = integer_kernel(m.row_vectors(), n);
      if (ker.rank() == 0) continue;
      if (ker.rank() == 1) {
        found.insert(covector_to_hyperplane(PrimitiveCovector::canonical(ker.basis().front())));
        continue;
      }
      out.infinite = true;
      out.complete = false;
      for (const auto& g : covectors_up_to(n, dual_norm_bound * dual_norm_bound))
        if (ker.contains(g.values())) found.insert(covector_to_hyperplane(g));
    }
  } else {
    out.complete = false;
    for (const auto& h : subtori_with_dual_norm(n, k, dual_norm_bound * dual_norm_bound))
      if (act(t, h) == h) found.insert(h);
  }
  out.members.assign(found.begin(), found.end());
  return out;
}

NonExpansivityCertificate non_expansivity_certificate(const UnimodularMatrix& t, const NonExpansivityOptions& opt) {
  const std::size_t n = t.dim();
  if (n < 2) throw InputError(InputError::Kind::Precondition, "need n >= 2");
  NonExpansivityCertificate cert;
  cert.automorphism = t;
  if (auto order = matrix_order(t)) {
    cert.branch = NonExpansivityCertificate::Branch::FiniteOrder;
    cert.order = *order;
    if (!power(t.matrix(), *order).is_identity())
      throw std::logic_error("matrix_order returned a non-identity power");
    const std::size_t want = std::max<std::size_t>(2, opt.fixed_count);
    CovectorStream stream(n, Integer(want) * Integer(want) * 4 + 4);
    while (cert.fixed.size() < want) {
      auto g = stream.next();
      if (!g) break;
      cert.fixed.push_back(covector_to_hyperplane(*g));
    }
    cert.note = "T^" + to_string(*order) + " = Id fixes every subtorus";
    return cert;
  }

  cert.family = disjoint_hyperplane_orbits(t, opt.orbit_count, opt.budget);
  const DualAction action(t);
  bool all_converge = true;
  for (const auto& h : cert.family->family) {
    cert.converges.push_back(converges_to_full(action, h));
    all_converge = all_converge && cert.converges.back();
  }
  if (opt.with_isolation && !cert.family->family.empty())
    cert.isolation = isolation_radius_lower_bound(cert.family->family.front(), opt.isolation_norm,
                                                  opt.isolation_resolution);
  if (!cert.family->complete) {
    cert.branch = NonExpansivityCertificate::Branch::Inconclusive;
    cert.note = cert.family->note;
  } else if (!cert.family->rigorous) {
    cert.branch = NonExpansivityCertificate::Branch::Inconclusive;
    cert.note = "family evidence is not rigorous";
  } else if (!all_converge) {
    cert.branch = NonExpansivityCertificate::Branch::Inconclusive;
    cert.note = "a member orbit is periodic";
  } else {
    cert.branch = NonExpansivityCertificate::Branch::InfinitelyManyOrbits;
    cert.refuted_orbit_bound = cert.family->family.size() - 1;
  }
  return cert;
}

}  // namespace toral
