#include <algorithm>

#include "doctest.h"
#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "toral/errors.hpp"
#include "toral/lattice.hpp"
#include "toral/polynomial.hpp"

using namespace toral;

namespace {

bool same_row_space(const std::vector<IntVector>& a, const std::vector<IntVector>& b, std::size_t n) {
  return hnf(a, n) == hnf(b, n);
}

IntPolynomial poly(std::vector<long> c) {
  std::vector<Integer> z(c.begin(), c.end());
  return IntPolynomial(z);
}

}  // namespace

TEST_CASE("integer helpers") {
  CHECK(gcd(12, -18) == 6);
  CHECK(lcm(4, 6) == 12);
  CHECK(content({Integer(0), Integer(-6), Integer(9)}) == 3);
  CHECK(content({Integer(0), Integer(0)}) == 0);
  CHECK(primitive_canonical({Integer(0), Integer(-4), Integer(6)}) == IntVector{0, 2, -3});
  CHECK(norm_lex_less({Integer(1), Integer(0)}, {Integer(0), Integer(2)}));
  CHECK(norm_lex_less({Integer(0), Integer(1)}, {Integer(1), Integer(0)}));
  Rational q(6, 4);
  q.canonicalize();
  CHECK(to_string(q) == "3/2");
}

TEST_CASE("determinant agrees with Laplace expansion") {
  gen::Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.index(5);
    IntMatrix m = gen::random_matrix(rng, n, 6);
    CHECK(determinant(m) == oracle::det(oracle::rows_of(m)));
  }
}

TEST_CASE("unimodular matrices") {
  CHECK_THROWS_AS(UnimodularMatrix({{2, 0}, {0, 1}}), InputError);
  UnimodularMatrix cat{{2, 1}, {1, 1}};
  CHECK(cat.det() == 1);
  CHECK((cat * cat.inverse()).is_identity());
  CHECK(cat.pow(-2) == cat.inverse() * cat.inverse());
  CHECK(cat.pow(0).is_identity());

  gen::Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.index(3);
    UnimodularMatrix t = gen::random_word(rng, n, 8);
    CHECK((t * t.inverse()).is_identity());
    CHECK(oracle::rows_of(t.inverse().transpose().matrix()) == oracle::dual(oracle::rows_of(t.matrix())));
  }
}

TEST_CASE("exterior power") {
  IntMatrix m{{1, 2, 0}, {3, 4, 1}, {0, 1, 5}};
  IntMatrix e = exterior_power(m, 2);
  CHECK(e.rows() == 3);
  // rows {0,1}, cols {0,1}: 1*4 - 2*3
  CHECK(e(0, 0) == -2);
  CHECK(exterior_power(m, 1) == m);
  CHECK(exterior_power(m, 3)(0, 0) == determinant(m));
  gen::Rng rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    IntMatrix a = gen::random_matrix(rng, 4, 3), b = gen::random_matrix(rng, 4, 3);
    CHECK(exterior_power(a * b, 2) == exterior_power(a, 2) * exterior_power(b, 2));
  }
}

TEST_CASE("hermite normal form is canonical") {
  gen::Rng rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.index(4);
    const auto rows = gen::random_rows(rng, rng.index(5), n, 7);
    const Lattice l = hnf(rows, n);
    // Shape.
    const auto piv = l.pivots();
    for (std::size_t i = 0; i < l.rank(); ++i) {
      CHECK(l.basis()[i][piv[i]] > 0);
      for (std::size_t j = 0; j < piv[i]; ++j) CHECK(l.basis()[i][j] == 0);
      if (i > 0) CHECK(piv[i] > piv[i - 1]);
      for (std::size_t k = 0; k < i; ++k) {
        CHECK(l.basis()[k][piv[i]] >= 0);
        CHECK(l.basis()[k][piv[i]] < l.basis()[i][piv[i]]);
      }
    }
    // Idempotent, same span, invariant under row operations.
    CHECK(hnf(l.basis(), n) == l);
    for (const auto& r : rows) CHECK(l.contains(r));
    for (const auto& b : l.basis()) CHECK(hnf(rows, n).contains(b));
    CHECK(l.rank() == rank_of(rows, n));
    if (rows.size() >= 2) {
      auto mixed = rows;
      const long c = rng.uniform(-5, 5);
      for (std::size_t j = 0; j < n; ++j) mixed[0][j] += c * mixed[1][j];
      std::swap(mixed[0], mixed[1]);
      CHECK(same_row_space(rows, mixed, n));
    }
    CHECK(Lattice::from_canonical(n, l.basis()) == l);
  }
}

TEST_CASE("hnf transform") {
  gen::Rng rng(22);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.index(4);
    const auto rows = gen::random_rows(rng, 1 + rng.index(4), n, 6);
    const auto h = hnf_with_transform(rows, n);
    CHECK(oracle::det(oracle::rows_of(h.transform)) * oracle::det(oracle::rows_of(h.transform)) == 1);
    CHECK(oracle::mul(oracle::rows_of(h.transform), rows) == h.reduced);
    CHECK(std::vector<IntVector>(h.reduced.begin(), h.reduced.begin() + h.rank) == hnf(rows, n).basis());
  }
}

TEST_CASE("non-canonical bases are rejected") {
  CHECK_THROWS_AS(Lattice::from_canonical(2, {{Integer(2), Integer(0)}, {Integer(1), Integer(1)}}), InputError);
  CHECK_THROWS_AS(Lattice::from_canonical(2, {{Integer(1), Integer(3)}, {Integer(0), Integer(2)}}), InputError);
  CHECK_THROWS_AS(Lattice::from_canonical(2, {{Integer(-1), Integer(0)}}), InputError);
  CHECK_NOTHROW(Lattice::from_canonical(2, {{Integer(1), Integer(1)}, {Integer(0), Integer(2)}}));
}

TEST_CASE("integer kernel and saturation") {
  gen::Rng rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.index(4);
    const auto rows = gen::random_rows(rng, rng.index(4), n, 5);
    const Lattice k = integer_kernel(rows, n);
    CHECK(k.rank() == n - rank_of(rows, n));
    for (const auto& b : k.basis())
      for (const auto& r : rows) CHECK(dot(b, r) == 0);
    CHECK(is_saturated(k));
    // Every small kernel vector lies in the lattice.
    for (const auto& v : oracle::covectors(n, 9)) {
      bool in_kernel = true;
      for (const auto& r : rows) in_kernel = in_kernel && dot(v, r) == 0;
      CHECK(k.contains(v) == in_kernel);
    }
  }
  const Lattice l = hnf({{Integer(2), Integer(4)}}, 2);
  CHECK_FALSE(is_saturated(l));
  CHECK(saturate(l).basis() == std::vector<IntVector>{{1, 2}});
}

TEST_CASE("characteristic polynomial agrees with cofactor expansion") {
  gen::Rng rng(31);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = 1 + rng.index(5);
    IntMatrix m = gen::random_matrix(rng, n, 5);
    CHECK(char_poly(m).coefficients() == oracle::char_poly(oracle::rows_of(m)));
  }
  CHECK(char_poly(UnimodularMatrix{{2, 1}, {1, 1}}) == poly({1, -3, 1}));
}

TEST_CASE("cyclotomic polynomials") {
  CHECK(cyclotomic(1) == poly({-1, 1}));
  CHECK(cyclotomic(2) == poly({1, 1}));
  CHECK(cyclotomic(3) == poly({1, 1, 1}));
  CHECK(cyclotomic(4) == poly({1, 0, 1}));
  CHECK(cyclotomic(6) == poly({1, -1, 1}));
  CHECK(cyclotomic(8) == poly({1, 0, 0, 0, 1}));
  CHECK(cyclotomic(12) == poly({1, 0, -1, 0, 1}));
  for (unsigned long m = 1; m <= 30; ++m) {
    CHECK(static_cast<unsigned long>(cyclotomic(m).degree()) == euler_phi(m));
    CHECK(cyclotomic_order(cyclotomic(m)) == m);
  }
  CHECK(cyclotomic_orders_up_to_degree(2) == std::vector<unsigned long>{1, 2, 3, 4, 6});
  CHECK(finite_order_exponent_bound(2) == 12);
  CHECK(finite_order_exponent_bound(3) == 12);
  CHECK(finite_order_exponent_bound(4) == 120);
}

TEST_CASE("rational factorisation") {
  // Reference factorisations computed with a computer algebra system.
  struct Case {
    std::vector<long> p;
    std::vector<std::pair<std::vector<long>, std::size_t>> factors;
  };
  const std::vector<Case> cases = {
      {{-1, -1, 0, 1}, {{{-1, -1, 0, 1}, 1}}},
      {{-1, 4, -4, 1}, {{{-1, 1}, 1}, {{1, -3, 1}, 1}}},
      {{-1, 0, 0, 0, 1}, {{{-1, 1}, 1}, {{1, 1}, 1}, {{1, 0, 1}, 1}}},
      {{-1, -1, -1, -2, 1, -1, 1}, {{{-1, -1, 1}, 1}, {{1, 0, 1}, 2}}},
      {{-1, 2, 3, -4, 1}, {{{1, -3, 1}, 1}, {{-1, -1, 1}, 1}}},
      {{1, 0, -10, 0, 1}, {{{1, 0, -10, 0, 1}, 1}}},
      {{-1, 0, 1, 0, -2, 0, 1}, {{{-1, -1, 0, 1}, 1}, {{1, -1, 0, 1}, 1}}},
      {{-1, 0, 0, 0, 0, 0, 1}, {{{-1, 1}, 1}, {{1, 1}, 1}, {{1, -1, 1}, 1}, {{1, 1, 1}, 1}}},
  };
  for (const auto& c : cases) {
    auto got = rational_factors(poly(c.p));
    std::vector<Factor> want;
    for (const auto& [f, m] : c.factors) want.push_back({poly(f), m});
    CHECK(got.size() == want.size());
    CHECK(std::is_permutation(got.begin(), got.end(), want.begin(), want.end()));
    CHECK(std::is_sorted(got.begin(), got.end(), [](const Factor& a, const Factor& b) { return a.poly < b.poly; }));
  }
}

TEST_CASE("factor product reconstructs the characteristic polynomial") {
  gen::Rng rng(32);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.index(3);
    const IntPolynomial p = char_poly(gen::random_word(rng, n, 10));
    IntPolynomial prod{1};
    for (const auto& f : rational_factors(p))
      for (std::size_t k = 0; k < f.multiplicity; ++k) prod = prod * f.poly;
    CHECK((prod == p || prod == p.negated()));
  }
}

TEST_CASE("matrix order agrees with direct iteration") {
  gen::Rng rng(33);
  int finite = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng.index(2);
    const UnimodularMatrix t = gen::random_word(rng, n, 1 + rng.index(6));
    const auto fast = matrix_order(t);
    const auto slow = oracle::order(oracle::rows_of(t.matrix()), 12);
    REQUIRE(fast.has_value() == slow.has_value());
    if (fast) {
      ++finite;
      CHECK(*fast == *slow);
    }
  }
  CHECK(finite > 20);
  CHECK(matrix_order(UnimodularMatrix{{0, -1}, {1, 0}}) == Integer(4));
  CHECK_FALSE(matrix_order(UnimodularMatrix{{1, 1}, {0, 1}}).has_value());
  CHECK(matrix_order(UnimodularMatrix{{0, -1}, {1, 1}}) == Integer(6));
}

TEST_CASE("cyclotomic verdict") {
  auto v = is_product_of_cyclotomics(poly({-1, 4, -4, 1}));
  CHECK_FALSE(v.all_cyclotomic);
  CHECK(v.orders == std::vector<unsigned long>{1});
  CHECK(v.refusal == poly({1, -3, 1}));
  CHECK(is_product_of_cyclotomics(poly({1, 0, 2, 0, 1})).all_cyclotomic);
  CHECK(cyclotomic_lcm(poly({-1, 0, 0, 0, 0, 0, 1})) == 6);
  CHECK(cyclotomic_lcm(poly({1, -3, 1})) == 1);
}
