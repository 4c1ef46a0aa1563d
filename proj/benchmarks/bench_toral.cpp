#include <benchmark/benchmark.h>

#include <random>

#include "toral/checker.hpp"
#include "toral/constructions.hpp"

using namespace toral;

namespace {

const UnimodularMatrix kCat{{2, 1}, {1, 1}};
const UnimodularMatrix kShear{{1, 1}, {0, 1}};
const UnimodularMatrix kCompanion{{0, 0, 1}, {1, 0, 1}, {0, 1, 0}};

std::vector<IntVector> random_rows(std::size_t rows, std::size_t n, unsigned seed) {
  std::mt19937 eng(seed);
  std::uniform_int_distribution<long> d(-20, 20);
  std::vector<IntVector> out(rows, IntVector(n));
  for (auto& r : out)
    for (auto& x : r) x = d(eng);
  return out;
}

void BM_Hnf(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto rows = random_rows(n, n, 7);
  for (auto _ : state) benchmark::DoNotOptimize(hnf(rows, n));
}
BENCHMARK(BM_Hnf)->Arg(3)->Arg(6)->Arg(10);

void BM_IntegerKernel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto rows = random_rows(n / 2, n, 8);
  for (auto _ : state) benchmark::DoNotOptimize(integer_kernel(rows, n));
}
BENCHMARK(BM_IntegerKernel)->Arg(4)->Arg(8);

void BM_CharPolyAndFactors(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const IntMatrix m = IntMatrix::from_rows(random_rows(n, n, 9));
  for (auto _ : state) benchmark::DoNotOptimize(rational_factors(char_poly(m)));
}
BENCHMARK(BM_CharPolyAndFactors)->Arg(3)->Arg(5);

void BM_DistalityVerdict(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(acts_distally_on_subp(kCompanion));
}
BENCHMARK(BM_DistalityVerdict);

void BM_DisjointFamily(benchmark::State& state) {
  const UnimodularMatrix& t = state.range(0) == 0 ? kCat : state.range(0) == 1 ? kShear : kCompanion;
  for (auto _ : state) benchmark::DoNotOptimize(disjoint_hyperplane_orbits(t, 10));
}
BENCHMARK(BM_DisjointFamily)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_VerifyFamily(benchmark::State& state) {
  const auto cert = disjoint_hyperplane_orbits(kCompanion, 10);
  for (auto _ : state) benchmark::DoNotOptimize(verify(cert));
}
BENCHMARK(BM_VerifyFamily)->Unit(benchmark::kMillisecond);

void BM_HausdorffToTorus(benchmark::State& state) {
  const Subtorus h = act(kCat.pow(state.range(0)), subtorus_from_generators({{1, 0}}, 2));
  for (auto _ : state) benchmark::DoNotOptimize(hausdorff_distance(h, Subtorus::full(2), 0.005));
}
BENCHMARK(BM_HausdorffToTorus)->Arg(1)->Arg(4);

void BM_Isolation(benchmark::State& state) {
  const Subtorus h = subtorus_from_generators({{1, 0}}, 2);
  for (auto _ : state) benchmark::DoNotOptimize(isolation_radius_lower_bound(h, 5, 0.009));
}
BENCHMARK(BM_Isolation)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
