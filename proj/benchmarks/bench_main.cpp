#include <benchmark/benchmark.h>

#include "martlat/corpus.hpp"
#include "martlat/lattice_calc.hpp"
#include "martlat/lp.hpp"

using namespace martlat;

namespace {

void BM_KrickebergHalves(benchmark::State& state) {
  const Scenario s = builtin_scenario("example-halves");
  const Martingale& x = s.martingales.at("X");
  for (auto _ : state) benchmark::DoNotOptimize(krickeberg_modulus(x, s.filtration, state.range(0)));
}
BENCHMARK(BM_KrickebergHalves)->Arg(10)->Arg(20)->Arg(40);

void BM_KrickebergRandom(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const Scenario s = generate_random_instance(7, d, 4, 4);
  const Martingale& x = s.martingales.at("X");
  for (auto _ : state) benchmark::DoNotOptimize(krickeberg_modulus(x, s.filtration));
}
BENCHMARK(BM_KrickebergRandom)->Arg(4)->Arg(8)->Arg(16);

void BM_LeastDominatingLp(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const Scenario s = generate_random_instance(11, d, 4, 4);
  const Martingale& x = s.martingales.at("X");
  for (auto _ : state) benchmark::DoNotOptimize(lp_least_dominating(x, s.filtration));
}
BENCHMARK(BM_LeastDominatingLp)->Arg(4)->Arg(8)->Arg(16);

void BM_RegularNormL1(benchmark::State& state) {
  const Scenario s = generate_random_instance(13, 8, 4, 4);
  const Martingale& x = s.martingales.at("X");
  for (auto _ : state) benchmark::DoNotOptimize(regular_norm(x, s.filtration, NormKind::L1));
}
BENCHMARK(BM_RegularNormL1);

void BM_ScenarioL1Unbounded(benchmark::State& state) {
  const Scenario s = builtin_scenario("example-l1-unbounded");
  for (auto _ : state) benchmark::DoNotOptimize(run_scenario(s));
}
BENCHMARK(BM_ScenarioL1Unbounded)->Unit(benchmark::kMillisecond);

void BM_Suite(benchmark::State& state, const char* name) {
  for (auto _ : state) benchmark::DoNotOptimize(run_property_suite(name, 20, 1));
}
BENCHMARK_CAPTURE(BM_Suite, oracle_equivalence, "oracle_equivalence")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Suite, fatou, "fatou")->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
