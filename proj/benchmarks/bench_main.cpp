#include <benchmark/benchmark.h>

#include "bupp/instances.hpp"
#include "bupp/learn.hpp"
#include "bupp/optimize.hpp"
#include "bupp/revenue.hpp"

using namespace bupp;

namespace {

ProductDist random_instance(std::size_t n, std::int64_t lattice) {
  SeededRng rng(42);
  return random_product(n, lattice, static_cast<std::size_t>(lattice) + 1, rng);
}

PriceVector mid_prices(std::size_t n, std::int64_t lattice) {
  return PriceVector(lattice, std::vector<std::int64_t>(n, lattice / 2));
}

}  // namespace

static void BM_Rev(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto d = random_instance(n, 16);
  auto p = mid_prices(n, 16);
  for (auto _ : state) benchmark::DoNotOptimize(rev(d, p));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Rev)->RangeMultiplier(2)->Range(2, 64)->Complexity();

static void BM_RevBruteforce(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  SeededRng rng(7);
  auto d = random_product(n, 8, 3, rng);
  auto p = mid_prices(n, 8);
  for (auto _ : state) benchmark::DoNotOptimize(rev_bruteforce(d, p));
}
BENCHMARK(BM_RevBruteforce)->DenseRange(2, 6, 2);

static void BM_OptimalBruteforce(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto d = random_instance(n, 8);
  auto grid = PriceGrid::lattice_points(8);
  for (auto _ : state) benchmark::DoNotOptimize(optimal_bruteforce(d, grid, {10'000'000, 1}));
}
BENCHMARK(BM_OptimalBruteforce)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

static void BM_CoordinateAscent(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto d = random_instance(n, 8);
  auto grid = PriceGrid::lattice_points(8);
  SeededRng rng(3);
  for (auto _ : state) benchmark::DoNotOptimize(coordinate_ascent(d, grid, 20, rng));
}
BENCHMARK(BM_CoordinateAscent)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_OptimalTwoPrice(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(optimal_two_price(state.range(0)));
}
BENCHMARK(BM_OptimalTwoPrice)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_QueryLearnerSingle(benchmark::State& state) {
  const auto m = state.range(0);
  const Rational eps = ratio(1, m);
  const std::int64_t k = m * m;
  std::vector<std::int64_t> support(static_cast<std::size_t>(k) + 1);
  std::vector<Rational> masses(support.size(), ratio(1, k + 1));
  for (std::size_t i = 0; i < support.size(); ++i) support[i] = static_cast<std::int64_t>(i);
  ProductDist d(std::vector<DiscreteDist>(4, DiscreteDist(k, support, masses)));
  LearnerConfig cfg;
  cfg.eps = eps;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    QueryOracle oracle(d, ++seed);
    benchmark::DoNotOptimize(learn_single_by_queries(oracle, 0, cfg));
  }
}
BENCHMARK(BM_QueryLearnerSingle)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_SampleLearner(benchmark::State& state) {
  SeededRng rng(5);
  auto inst = make_sample_hard(8, ratio(1, 10), rng);
  LearnerConfig cfg;
  cfg.eps = ratio(1, 10);
  cfg.budget_override = static_cast<std::uint64_t>(state.range(0));
  auto opt = bruteforce_optimizer(sample_hard_grid(), {10'000'000, 1});
  std::uint64_t seed = 0;
  for (auto _ : state) {
    SampleOracle oracle(inst.dist, ++seed);
    benchmark::DoNotOptimize(learn_from_samples(oracle, cfg, opt));
  }
}
BENCHMARK(BM_SampleLearner)->Arg(100)->Arg(10'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
