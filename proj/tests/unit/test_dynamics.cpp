#include <set>

#include "doctest.h"
#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "toral/dynamics.hpp"
#include "toral/growth.hpp"

using namespace toral;

namespace {

const UnimodularMatrix kCat{{2, 1}, {1, 1}};
const UnimodularMatrix kShear{{1, 1}, {0, 1}};
const UnimodularMatrix kRotation{{0, -1}, {1, 0}};
const UnimodularMatrix kCompanion{{0, 0, 1}, {1, 0, 1}, {0, 1, 0}};  // x^3 - x - 1

Subtorus hyperplane(const IntVector& g) { return covector_to_hyperplane(PrimitiveCovector::canonical(g)); }

UnimodularMatrix block(const UnimodularMatrix& a, const UnimodularMatrix& b) {
  const std::size_t n = a.dim() + b.dim();
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) m(i, j) = a.matrix()(i, j);
  for (std::size_t i = 0; i < b.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j) m(a.dim() + i, a.dim() + j) = b.matrix()(i, j);
  return UnimodularMatrix(m);
}

// Brute check of a claimed exterior bound on the next `extra` steps each way.
void check_bound_holds(const UnimodularMatrix& s, const IntVector& g, long window, const Rational& bound, long extra) {
  const auto sm = oracle::rows_of(s.matrix());
  const auto si = oracle::rows_of(s.inverse().matrix());
  IntVector f = g, b = g;
  for (long m = 1; m <= window + extra; ++m) {
    f = oracle::mat_vec(sm, f);
    b = oracle::mat_vec(si, b);
    if (m > window) {
      CHECK(Rational(oracle::norm_sq(f)) >= bound);
      CHECK(Rational(oracle::norm_sq(b)) >= bound);
    }
  }
}

}  // namespace

TEST_CASE("dual matrix and the duality square") {
  gen::Rng rng(51);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.index(3);
    const UnimodularMatrix t = gen::random_word(rng, n, 6);
    const UnimodularMatrix s = dual_matrix(t);
    CHECK(oracle::rows_of(s.matrix()) == oracle::dual(oracle::rows_of(t.matrix())));
    const IntVector g = gen::random_nonzero_vector(rng, n, 4);
    CHECK(act(t, hyperplane(g)) == hyperplane(oracle::mat_vec(oracle::rows_of(s.matrix()), g)));
  }
}

TEST_CASE("action on subtori is a group action") {
  gen::Rng rng(52);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.index(3);
    const UnimodularMatrix t = gen::random_word(rng, n, 5), u = gen::random_word(rng, n, 5);
    const Subtorus h = gen::random_subtorus(rng, n);
    CHECK(act(t * u, h) == act(t, act(u, h)));
    CHECK(act(t.inverse(), act(t, h)) == h);
    CHECK(act(t, h).dim() == h.dim());
  }
}

TEST_CASE("covector periods agree with direct iteration") {
  gen::Rng rng(53);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + rng.index(2);
    const UnimodularMatrix t = gen::random_word(rng, n, 1 + rng.index(5));
    const DualAction action(t);
    const auto s = oracle::rows_of(action.dual().matrix());
    for (const auto& g : covectors_up_to(n, 18)) {
      const auto fast = action.period(g);
      const auto slow = oracle::first_return(s, g.values(), 12);
      REQUIRE(fast.has_value() == slow.has_value());
      if (fast) {
        CHECK(*fast == *slow);
        CHECK(action.period_exponent() % *fast == 0);
      }
      CHECK(action.is_periodic(g) == fast.has_value());
      CHECK(action.step(g).values() == oracle::canonical(oracle::mat_vec(s, g.values())));
    }
  }
}

TEST_CASE("subtorus periods agree with direct iteration") {
  gen::Rng rng(54);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 3 + rng.index(2);
    const UnimodularMatrix t = gen::random_word(rng, n, 1 + rng.index(4));
    const Subtorus h = gen::random_subtorus(rng, n);
    std::optional<long> slow;
    Subtorus cur = h;
    for (long p = 1; p <= 120; ++p) {
      cur = act(t, cur);
      if (cur == h) {
        slow = p;
        break;
      }
    }
    const auto fast = subtorus_period(t, h);
    REQUIRE(fast.has_value() == slow.has_value());
    if (fast) CHECK(*fast == *slow);
  }
}

TEST_CASE("orbit reports") {
  const Subtorus h = hyperplane({1, 0});
  const OrbitReport rot = orbit(kRotation, h, 5);
  CHECK(rot.status == OrbitStatus::Periodic);
  CHECK(rot.period == 2);
  REQUIRE(rot.window.size() == 2);
  CHECK(rot.window[1].subtorus == act(kRotation, h));

  const OrbitReport cat = orbit(kCat, h, 4);
  CHECK(cat.status == OrbitStatus::Injective);
  REQUIRE(cat.window.size() == 9);
  for (const auto& e : cat.window) CHECK(e.subtorus == act(kCat.pow(e.exponent), h));
  REQUIRE(cat.min_exterior_norm_sq.has_value());
  check_bound_holds(dual_matrix(kCat), {1, 0}, 4, *cat.min_exterior_norm_sq, 20);

  const OrbitReport line = orbit(kCompanion, subtorus_from_generators({{1, 0, 0}}, 3), 3);
  CHECK(line.status == OrbitStatus::Injective);
  CHECK(line.window.size() == 7);
  CHECK_FALSE(line.min_exterior_norm_sq.has_value());
}

TEST_CASE("growth certificates give valid exterior bounds") {
  const std::vector<UnimodularMatrix> maps = {kCat, kShear, UnimodularMatrix{{-1, -1}, {0, -1}}, kCompanion,
                                              UnimodularMatrix{{3, 2}, {1, 1}}, block(kCat, kShear)};
  for (const auto& t : maps) {
    const UnimodularMatrix s = dual_matrix(t);
    const DualAction action(t);
    for (const auto& g : covectors_up_to(t.dim(), 5)) {
      if (action.is_periodic(g)) continue;
      const auto found = find_growth_certificate(s, g.values(), Rational(200), 1, 200);
      REQUIRE(found.has_value());
      CHECK(found->bound > 200);
      CHECK(exterior_bound(s, g.values(), found->window, found->certs) == found->bound);
      check_bound_holds(s, g.values(), found->window, found->bound, 30);
    }
  }
}

TEST_CASE("lyapunov pieces") {
  const IntMatrix a = dual_matrix(kCat).matrix();
  const auto q = solve_lyapunov(a, Rational(2));
  REQUIRE(q.has_value());
  const auto r = lyapunov_residual(a, *q, Rational(2));
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) CHECK(r[i][j] == Rational(i == j ? 1 : 0));
  CHECK(is_positive_definite({{Rational(2), Rational(1)}, {Rational(1), Rational(2)}}));
  CHECK_FALSE(is_positive_definite({{Rational(1), Rational(2)}, {Rational(2), Rational(1)}}));
  CHECK(quadratic_value({{Rational(1), Rational(0)}, {Rational(0), Rational(3)}}, {1, 2}) == 13);
  CHECK(row_sum_bound({{Rational(1), Rational(-2)}, {Rational(-2), Rational(1)}}) == 3);
  CHECK(std::is_sorted(lyapunov_rates().rbegin(), lyapunov_rates().rend()));
}

TEST_CASE("certified hyperplane orbits reach the target") {
  const DualAction action(kCompanion);
  const auto rep = certified_hyperplane_orbit(action, hyperplane({0, 0, 1}), Rational(500), 1, 400);
  REQUIRE(rep.min_exterior_norm_sq.has_value());
  CHECK(*rep.min_exterior_norm_sq > 500);
  check_bound_holds(action.dual(), {0, 0, 1}, rep.window_radius, *rep.min_exterior_norm_sq, 30);
}

TEST_CASE("convergence to the full torus") {
  CHECK(converges_to_full(kCat, hyperplane({1, 0})));
  CHECK(converges_to_full(kShear, hyperplane({1, 0})));
  CHECK_FALSE(converges_to_full(kShear, hyperplane({0, 1})));
  CHECK_FALSE(converges_to_full(kRotation, hyperplane({1, 2})));
  CHECK(converges_to_full_heuristic(kCompanion, subtorus_from_generators({{1, 0, 0}}, 3), 6));
  CHECK_FALSE(converges_to_full_heuristic(block(kCat, UnimodularMatrix{{1}}),
                                          subtorus_from_generators({{0, 0, 1}}, 3), 6));
}

TEST_CASE("linear verdicts") {
  CHECK_FALSE(invariant_rational_subspaces(kCat).exists);
  CHECK_FALSE(invariant_rational_subspaces(kCompanion).exists);
  const UnimodularMatrix mixed = block(kCat, UnimodularMatrix{{1}});
  const auto inv = invariant_rational_subspaces(mixed);
  CHECK(inv.exists);
  REQUIRE_FALSE(inv.witnesses.empty());
  for (const auto& w : inv.witnesses) {
    CHECK(act(mixed, w) == w);
    CHECK_FALSE(w.is_trivial());
    CHECK_FALSE(w.is_full());
  }
  CHECK(is_distal_linear(kShear));
  CHECK(is_distal_linear(kRotation));
  CHECK_FALSE(is_distal_linear(kCat));
  CHECK(is_ergodic(kCat));
  CHECK(is_ergodic(kCompanion));
  CHECK_FALSE(is_ergodic(kShear));
  CHECK_FALSE(is_ergodic(kRotation));
  CHECK_FALSE(is_ergodic(mixed));
}

TEST_CASE("distality on the space of subgroups") {
  const auto rot = acts_distally_on_subp(kRotation);
  CHECK(rot.distal);
  CHECK(rot.order == Integer(4));
  CHECK_FALSE(rot.witness.has_value());

  for (const auto& t : {kCat, kShear, kCompanion}) {
    const auto v = acts_distally_on_subp(t);
    CHECK_FALSE(v.distal);
    CHECK_FALSE(v.order.has_value());
    REQUIRE(v.witness_covector.has_value());
    CHECK(v.witness_converges);
    CHECK(*v.witness == covector_to_hyperplane(*v.witness_covector));
    const auto s = oracle::rows_of(dual_matrix(t).matrix());
    CHECK_FALSE(oracle::first_return(s, v.witness_covector->values(), 200).has_value());
  }
}

TEST_CASE("finite groups") {
  const auto minus = group_is_finite({UnimodularMatrix{{-1, 0}, {0, -1}}}, 100);
  CHECK(minus.kind == GroupFiniteness::Kind::Finite);
  CHECK(minus.order == 2);

  const UnimodularMatrix swap{{0, 1}, {1, 0}};
  const auto dihedral = group_is_finite({kRotation, swap}, 100);
  REQUIRE(dihedral.kind == GroupFiniteness::Kind::Finite);
  // Closure by brute force.
  std::set<oracle::Mat> seen{oracle::identity(2)};
  std::vector<oracle::Mat> todo{oracle::identity(2)};
  while (!todo.empty()) {
    auto m = todo.back();
    todo.pop_back();
    for (const auto& g : {kRotation, swap}) {
      auto p = oracle::mul(m, oracle::rows_of(g.matrix()));
      if (seen.insert(p).second) todo.push_back(p);
    }
  }
  CHECK(dihedral.order == seen.size());
  for (const auto& e : dihedral.elements) CHECK(seen.count(oracle::rows_of(e.matrix())) == 1);

  const auto shear = group_is_finite({kShear}, 100);
  CHECK(shear.kind == GroupFiniteness::Kind::Infinite);
  REQUIRE(shear.witness.has_value());
  CHECK_FALSE(matrix_order(*shear.witness).has_value());
}
