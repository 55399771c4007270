#include <benchmark/benchmark.h>

#include <vector>

#include "stylo/changepoint.hpp"
#include "stylo/fusion.hpp"
#include "stylo/random.hpp"
#include "stylo/stylocpa.hpp"
#include "stylo/synthetic.hpp"
#include "stylo/textstats.hpp"

namespace {

std::vector<double> step_series(std::size_t n, std::uint64_t seed) {
  stylo::Rng rng(seed);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = rng.normal() + (i >= n / 2 ? 4.0 : 0.0);
  return x;
}

void BM_Pelt(benchmark::State& state) {
  const stylo::Series s(step_series(static_cast<std::size_t>(state.range(0)), 3));
  const double penalty = stylo::default_penalty(s);
  for (auto _ : state) benchmark::DoNotOptimize(stylo::pelt(s, penalty));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Pelt)->RangeMultiplier(4)->Range(16, 4096)->Complexity();

// Pruning pays off when the number of changes grows with N.
void BM_PeltManySteps(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  stylo::Rng rng(8);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = rng.normal() + ((i / 50) % 2 == 1 ? 4.0 : 0.0);
  const stylo::Series s(x);
  const double penalty = stylo::default_penalty(s);
  for (auto _ : state) benchmark::DoNotOptimize(stylo::pelt(s, penalty));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_PeltManySteps)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

void BM_BruteForce(benchmark::State& state) {
  const stylo::Series s(step_series(static_cast<std::size_t>(state.range(0)), 3));
  for (auto _ : state) benchmark::DoNotOptimize(stylo::brute_force_optimal(s, 2.0));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BruteForce)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

void BM_Extract(benchmark::State& state) {
  const auto pool = stylo::default_human_pool(64, 5);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(stylo::extract(pool.tweets[i % pool.tweets.size()]));
    ++i;
  }
}
BENCHMARK(BM_Extract);

void BM_Localize(benchmark::State& state) {
  const auto human = stylo::default_human_pool(200, 1);
  const auto ai = stylo::default_ai_pool(200, 2);
  const auto timelines = stylo::synth_mixed(human, ai, static_cast<std::size_t>(state.range(0)), 1, 4);
  const auto m = stylo::build_matrix(timelines.front());
  for (auto _ : state) benchmark::DoNotOptimize(stylo::detect(m));
}
BENCHMARK(BM_Localize)->Arg(25)->Arg(100);

void BM_FusionForward(benchmark::State& state) {
  const std::size_t e = static_cast<std::size_t>(state.range(0));
  auto model = stylo::FusionModel::initialize(e, stylo::Hyperparams{});
  const auto pool = stylo::default_human_pool(32, 6);
  std::vector<stylo::StyloVector> styles;
  for (const auto& t : pool.tweets) styles.push_back(stylo::extract(t));
  model.fit_normalizer(styles);
  std::vector<double> x(model.input_dim(), 0.25);
  for (auto _ : state) benchmark::DoNotOptimize(model.forward(x));
}
BENCHMARK(BM_FusionForward)->Arg(0)->Arg(16)->Arg(768);

}  // namespace
