// Serial reference kernels against their OpenMP counterparts on the sweep
// sizes used by the certificates.
#include <benchmark/benchmark.h>

#include <vector>

#include "frameweave/frame_core.hpp"

namespace fw = frameweave;
namespace k = frameweave::kernels;

namespace {

struct WaveletCase {
  fw::WaveletGenerator gen = fw::make_powerlaw_wavelet(0.5, 1.0);
  fw::SystemParams params{2.0, 0.5, 2};
  fw::SweepPlan plan;
  k::Ladder ladder;
  k::Ladder choices;
  std::vector<double> gammas;

  explicit WaveletCase(int points) {
    plan = fw::plan_period(gen, params, points);
    const auto depth = fw::truncation_depth(gen, params);
    ladder = fw::pattern_ladder(params, fw::WeavingPattern::constant(2, 0), plan, depth);
    choices = fw::choice_ladder(params, plan, depth);
    gammas = plan.abscissae();
  }
};

template <bool Parallel>
void BM_multiplier_sweep(benchmark::State& state) {
  const WaveletCase c(static_cast<int>(state.range(0)));
  std::vector<double> out(c.gammas.size());
  for (auto _ : state) {
    if constexpr (Parallel) {
      k::omp::multiplier_sweep(c.gen, c.ladder, 2.0, c.gammas, out);
    } else {
      k::serial::multiplier_sweep(c.gen, c.ladder, 2.0, c.gammas, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(c.gammas.size()));
}

template <bool Parallel>
void BM_adversary_sweep(benchmark::State& state) {
  const WaveletCase c(static_cast<int>(state.range(0)));
  std::vector<double> lo(c.gammas.size()), hi(c.gammas.size());
  for (auto _ : state) {
    if constexpr (Parallel) {
      k::omp::adversary_sweep(c.gen, c.choices, 2.0, c.gammas, lo, hi);
    } else {
      k::serial::adversary_sweep(c.gen, c.choices, 2.0, c.gammas, lo, hi);
    }
    benchmark::DoNotOptimize(lo.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(c.gammas.size()));
}

template <bool Parallel>
void BM_gabor_adversary(benchmark::State& state) {
  const fw::GaborGenerator gen(0.0, 3.0);
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> xs(n), lo(n), hi(n);
  for (std::size_t i = 0; i < n; ++i) xs[i] = 2.0 * static_cast<double>(i) / static_cast<double>(n);
  for (auto _ : state) {
    if constexpr (Parallel) {
      k::omp::gabor_adversary_sweep(gen, 1.0, 2, 3.0, xs, lo, hi);
    } else {
      k::serial::gabor_adversary_sweep(gen, 1.0, 2, 3.0, xs, lo, hi);
    }
    benchmark::DoNotOptimize(lo.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}

}  // namespace

BENCHMARK(BM_multiplier_sweep<false>)->Arg(4096)->Arg(65536);
BENCHMARK(BM_multiplier_sweep<true>)->Arg(4096)->Arg(65536);
BENCHMARK(BM_adversary_sweep<false>)->Arg(4096)->Arg(65536);
BENCHMARK(BM_adversary_sweep<true>)->Arg(4096)->Arg(65536);
BENCHMARK(BM_gabor_adversary<false>)->Arg(4096)->Arg(65536);
BENCHMARK(BM_gabor_adversary<true>)->Arg(4096)->Arg(65536);

BENCHMARK_MAIN();
