#include <benchmark/benchmark.h>

#include "covtau/curves.hpp"
#include "covtau/dominance.hpp"
#include "covtau/metrics.hpp"
#include "covtau/synth.hpp"

namespace {

covtau::SuccessProfile profile(std::size_t tasks, std::uint64_t seed) {
  covtau::ProfileSpec spec;
  spec.generator = covtau::Generator::kUniformRandom;
  spec.tasks = tasks;
  spec.seed = seed;
  return covtau::make_profile(spec);
}

void BM_pass_at_k_exact(benchmark::State& state) {
  const auto prof = profile(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(covtau::pass_at_k_exact(prof, 8192));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_pass_at_k_exact)->Arg(100)->Arg(10000);

void BM_build_cover_curve(benchmark::State& state) {
  const auto prof = profile(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(covtau::build_cover_curve(prof));
}
BENCHMARK(BM_build_cover_curve)->Arg(100)->Arg(10000);

void BM_auc_plus_cover(benchmark::State& state) {
  const auto a = covtau::build_cover_curve(profile(static_cast<std::size_t>(state.range(0)), 3));
  const auto b = covtau::build_cover_curve(profile(static_cast<std::size_t>(state.range(0)), 4));
  for (auto _ : state) benchmark::DoNotOptimize(covtau::auc_plus_cover(a, b));
}
BENCHMARK(BM_auc_plus_cover)->Arg(100)->Arg(2000);

void BM_pass_at_k_unbiased(benchmark::State& state) {
  const covtau::TaskCounts counts{"t", 8192, 137};
  for (auto _ : state) benchmark::DoNotOptimize(covtau::pass_at_k_unbiased(counts, static_cast<std::uint64_t>(state.range(0))));
}
BENCHMARK(BM_pass_at_k_unbiased)->Arg(16)->Arg(4096);

}  // namespace

BENCHMARK_MAIN();
