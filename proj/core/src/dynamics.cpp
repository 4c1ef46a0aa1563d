#include "toral/dynamics.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "toral/errors.hpp"

namespace toral {

namespace {

void require_same_dim(const UnimodularMatrix& t, const Subtorus& h) {
  if (t.dim() != h.ambient_dim())
    throw InputError(InputError::Kind::DimensionMismatch, "automorphism and subtorus have different dimensions");
}

std::vector<Integer> divisors_ascending(const Integer& m) {
  std::vector<Integer> out;
  for (Integer d = 1; d * d <= m; ++d) {
    if (!mpz_divisible_p(m.get_mpz_t(), d.get_mpz_t())) continue;
    out.push_back(d);
    if (d * d != m) out.push_back(m / d);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Integer min_row_norm(const Lattice& l) {
  Integer best = -1;
  for (const auto& r : l.basis()) {
    Integer v = norm_sq(r);
    if (best < 0 || v < best) best = v;
  }
  return best;
}

bool has_cyclotomic_factor(const IntPolynomial& p) {
  for (unsigned long m : cyclotomic_orders_up_to_degree(static_cast<std::size_t>(p.degree())))
    if (divide_exact(p, cyclotomic(m))) return true;
  return false;
}

}  // namespace

Subtorus act(const UnimodularMatrix& t, const Subtorus& h) {
  require_same_dim(t, h);
  std::vector<IntVector> rows;
  for (const auto& b : h.lattice().basis()) rows.push_back(t.apply(b));
  // A unimodular image of a saturated lattice is saturated.
  return Subtorus(hnf(rows, h.ambient_dim()));
}

UnimodularMatrix dual_matrix(const UnimodularMatrix& t) { return t.inverse().transpose(); }

DualAction::DualAction(const UnimodularMatrix& t)
    : t_(t),
      s_(dual_matrix(t)),
      s_inv_(t.transpose()),
      period_exponent_(cyclotomic_lcm(char_poly(t))),
      s_power_(power(s_.matrix(), period_exponent_)) {}

PrimitiveCovector DualAction::step(const PrimitiveCovector& gamma, long m) const {
  IntVector v = gamma.values();
  const IntMatrix& a = m >= 0 ? s_.matrix() : s_inv_.matrix();
  for (long i = 0; i < std::abs(m); ++i) v = a.apply(v);
  return PrimitiveCovector::canonical(std::move(v));
}

bool DualAction::is_periodic(const PrimitiveCovector& gamma) const {
  return PrimitiveCovector::canonical(s_power_.apply(gamma.values())) == gamma;
}

std::optional<Integer> DualAction::period(const PrimitiveCovector& gamma) const {
  if (!is_periodic(gamma)) return std::nullopt;
  for (const auto& d : divisors_ascending(period_exponent_))
    if (PrimitiveCovector::canonical(power(s_.matrix(), d).apply(gamma.values())) == gamma) return d;
  return period_exponent_;
}

std::optional<Integer> subtorus_period(const UnimodularMatrix& t, const Subtorus& h) {
  require_same_dim(t, h);
  const std::size_t n = t.dim(), k = h.dim();
  if (k == 0 || k == n) return Integer(1);
  if (k + 1 == n) return DualAction(t).period(hyperplane_to_covector(h));
  const IntMatrix wedge = k == 1 ? t.matrix() : exterior_power(t.matrix(), k);
  const Integer m = cyclotomic_lcm(char_poly(wedge));
  if (act(UnimodularMatrix(power(t.matrix(), m)), h) != h) return std::nullopt;
  for (const auto& d : divisors_ascending(m))
    if (act(UnimodularMatrix(power(t.matrix(), d)), h) == h) return d;
  return m;
}

OrbitReport orbit(const UnimodularMatrix& t, const Subtorus& h, long window_radius) {
  require_same_dim(t, h);
  if (window_radius < 1) throw InputError(InputError::Kind::Precondition, "window radius must be >= 1");
  OrbitReport rep;
  rep.window_radius = window_radius;
  if (auto p = subtorus_period(t, h)) {
    rep.status = OrbitStatus::Periodic;
    rep.period = *p;
    Subtorus cur = h;
    for (long m = 0; m < p->get_si(); ++m) {
      rep.window.push_back({m, cur});
      cur = act(t, cur);
    }
    return rep;
  }
  rep.status = OrbitStatus::Injective;
  const UnimodularMatrix inv = t.inverse();
  std::vector<OrbitEntry> back;
  Subtorus cur = h;
  for (long m = 1; m <= window_radius; ++m) {
    cur = act(inv, cur);
    back.push_back({-m, cur});
  }
  rep.window.assign(back.rbegin(), back.rend());
  rep.window.push_back({0, h});
  cur = h;
  for (long m = 1; m <= window_radius; ++m) {
    cur = act(t, cur);
    rep.window.push_back({m, cur});
  }
  if (h.dim() + 1 == h.ambient_dim()) {
    const UnimodularMatrix s = dual_matrix(t);
    if (auto g = find_growth_certificate(s, hyperplane_to_covector(h).values(), Rational(0), window_radius,
                                         window_radius)) {
      rep.min_exterior_norm_sq = g->bound;
      rep.growth = std::move(g->certs);
    }
  }
  return rep;
}

OrbitReport certified_hyperplane_orbit(const DualAction& action, const Subtorus& h, const Rational& target_norm_sq,
                                       long min_window, long max_window) {
  const PrimitiveCovector gamma = hyperplane_to_covector(h);
  OrbitReport rep;
  if (auto p = action.period(gamma)) {
    rep.status = OrbitStatus::Periodic;
    rep.period = *p;
    rep.window_radius = 0;
    PrimitiveCovector cur = gamma;
    for (long m = 0; m < p->get_si(); ++m) {
      rep.window.push_back({m, covector_to_hyperplane(cur)});
      cur = action.step(cur);
    }
    return rep;
  }
  rep.status = OrbitStatus::Injective;
  long w = std::max(1L, min_window);
  if (auto g = find_growth_certificate(action.dual(), gamma.values(), target_norm_sq, w, max_window)) {
    w = g->window;
    rep.min_exterior_norm_sq = g->bound;
    rep.growth = std::move(g->certs);
  }
  rep.window_radius = w;
  std::vector<OrbitEntry> back;
  PrimitiveCovector cur = gamma;
  for (long m = 1; m <= w; ++m) {
    cur = action.step(cur, -1);
    back.push_back({-m, covector_to_hyperplane(cur)});
  }
  rep.window.assign(back.rbegin(), back.rend());
  rep.window.push_back({0, h});
  cur = gamma;
  for (long m = 1; m <= w; ++m) {
    cur = action.step(cur);
    rep.window.push_back({m, covector_to_hyperplane(cur)});
  }
  return rep;
}

bool converges_to_full(const DualAction& action, const Subtorus& h) {
  require_same_dim(action.primal(), h);
  if (h.dim() + 1 != h.ambient_dim())
    throw InputError(InputError::Kind::Precondition, "exact convergence decision needs a codimension-1 subtorus");
  return !action.is_periodic(hyperplane_to_covector(h));
}

bool converges_to_full(const UnimodularMatrix& t, const Subtorus& h) { return converges_to_full(DualAction(t), h); }

bool converges_to_full_heuristic(const UnimodularMatrix& t, const Subtorus& h, long window) {
  require_same_dim(t, h);
  if (h.is_full()) return true;
  if (subtorus_period(t, h)) return false;
  const Integer centre = min_row_norm(annihilator(h));
  const Integer ahead = min_row_norm(annihilator(act(t.pow(window), h)));
  const Integer behind = min_row_norm(annihilator(act(t.pow(-window), h)));
  return ahead > centre && behind > centre;
}

InvariantSubspaces invariant_rational_subspaces(const UnimodularMatrix& t) {
  const std::size_t n = t.dim();
  if (n < 2) throw InputError(InputError::Kind::Precondition, "invariant subspace search needs n >= 2");
  const auto factors = rational_factors(char_poly(t));
  InvariantSubspaces out;
  if (factors.size() == 1 && factors.front().multiplicity == 1) return out;
  out.exists = true;
  std::set<Subtorus> found;
  for (const auto& f : factors) {
    const IntMatrix ft = f.poly.evaluate(t.matrix());
    Lattice k = integer_kernel(ft.row_vectors(), n);
    if (k.rank() > 0 && k.rank() < n) {
      found.insert(Subtorus(k));
      continue;
    }
    // f(T) = 0: the minimal polynomial is f, so any cyclic subspace is proper.
    std::vector<IntVector> cyc;
    IntVector v(n);
    v[0] = 1;
    for (long i = 0; i < f.poly.degree(); ++i) {
      cyc.push_back(v);
      v = t.apply(v);
    }
    found.insert(subtorus_from_generators(cyc, n));
  }
  out.witnesses.assign(found.begin(), found.end());
  return out;
}

bool is_distal_linear(const UnimodularMatrix& t) { return is_product_of_cyclotomics(char_poly(t)).all_cyclotomic; }

bool is_ergodic(const UnimodularMatrix& t) { return !has_cyclotomic_factor(char_poly(t)); }

DistalityVerdict acts_distally_on_subp(const UnimodularMatrix& t) {
  DistalityVerdict v;
  v.order = matrix_order(t);
  v.distal = v.order.has_value();
  if (v.distal) return v;
  const DualAction action(t);
  for (Integer cap = 1;; cap *= 4) {
    for (const auto& gamma : covectors_up_to(t.dim(), cap)) {
      if (action.is_periodic(gamma)) continue;
      v.witness_covector = gamma;
      v.witness = covector_to_hyperplane(gamma);
      v.witness_converges = true;
      return v;
    }
  }
}

GroupFiniteness group_is_finite(const std::vector<UnimodularMatrix>& generators, std::size_t cap) {
  if (generators.empty()) throw InputError(InputError::Kind::Precondition, "need at least one generator");
  if (cap < 1) throw InputError(InputError::Kind::Precondition, "cap must be >= 1");
  const std::size_t n = generators.front().dim();
  for (const auto& g : generators)
    if (g.dim() != n) throw InputError(InputError::Kind::DimensionMismatch, "generators have different dimensions");

  GroupFiniteness out;
  for (const auto& g : generators) {
    if (!matrix_order(g)) {
      out.kind = GroupFiniteness::Kind::Infinite;
      out.witness = g;
      return out;
    }
  }
  std::set<UnimodularMatrix> seen{UnimodularMatrix::identity(n)};
  std::deque<UnimodularMatrix> queue{UnimodularMatrix::identity(n)};
  while (!queue.empty()) {
    UnimodularMatrix x = queue.front();
    queue.pop_front();
    for (const auto& g : generators) {
      UnimodularMatrix y = x * g;
      if (seen.count(y)) continue;
      out.explored = seen.size();
      if (!matrix_order(y)) {
        out.kind = GroupFiniteness::Kind::Infinite;
        out.witness = y;
        return out;
      }
      if (seen.size() >= cap) {
        out.kind = GroupFiniteness::Kind::Inconclusive;
        return out;
      }
      seen.insert(y);
      queue.push_back(y);
    }
  }
  out.kind = GroupFiniteness::Kind::Finite;
  out.order = seen.size();
  out.explored = seen.size();
  out.elements.assign(seen.begin(), seen.end());
  return out;
}

}  // namespace toral
