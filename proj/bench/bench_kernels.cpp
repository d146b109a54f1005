// Serial reference vs OpenMP kernels on posterior draws and covariate grids.

#include <benchmark/benchmark.h>

#include <vector>

#include "dxa/dpm.hpp"
#include "dxa/measures.hpp"
#include "dxa/posterior.hpp"
#include "dxa/rng.hpp"

using namespace dxa;

namespace {

struct Draws {
  std::vector<PosteriorPredictive> d, nd, d_x, nd_x;
};

const Draws& draws() {
  static const Draws out = [] {
    Rng r(5);
    std::vector<double> yd, ynd, xd, xnd;
    for (int i = 0; i < 200; ++i) {
      xd.push_back(2 * r.uniform() - 1);
      xnd.push_back(2 * r.uniform() - 1);
      yd.push_back(r.normal(1.5 + xd.back(), 1.0));
      ynd.push_back(r.normal(0.0, 1.0 + 0.5 * xnd.back() * xnd.back()));
    }
    McmcConfig cfg;
    cfg.burn_in = 200;
    cfg.thin = 2;
    cfg.n_keep = 100;
    Draws w;
    w.d = fit_dpm(yd, cfg).draws;
    w.nd = fit_dpm(ynd, cfg).draws;
    w.d_x = fit_ddp(yd, xd, cfg).draws;
    w.nd_x = fit_ddp(ynd, xnd, cfg).draws;
    return w;
  }();
  return out;
}

Execution mode(const benchmark::State& s) { return s.range(0) ? Execution::parallel : Execution::serial; }

void BM_PosteriorAffinity(benchmark::State& s) {
  const auto& w = draws();
  for (auto _ : s) benchmark::DoNotOptimize(posterior_affinity(w.d, w.nd, {}, mode(s)));
}

void BM_PosteriorYouden(benchmark::State& s) {
  const auto& w = draws();
  for (auto _ : s) benchmark::DoNotOptimize(posterior_youden(w.d, w.nd, TestDirection::upper_tailed, {}, 1000, mode(s)));
}

void BM_ConditionalAffinity(benchmark::State& s) {
  const auto& w = draws();
  std::vector<double> grid;
  for (int k = 0; k <= 20; ++k) grid.push_back(-1.0 + 0.1 * k);
  for (auto _ : s) benchmark::DoNotOptimize(posterior_affinity_conditional(w.d_x, w.nd_x, grid, {}, mode(s)));
}

void BM_AffinityConditionalKnown(benchmark::State& s) {
  const ConditionalTestPair c{[](double x) { return Density(NormalParams{x, 1.0}); },
                              [](double x) { return Density(NormalParams{x - 3.0, 1.0 + x * x}); },
                              Interval{-10.0, 10.0}};
  std::vector<double> grid;
  for (int k = 0; k < 1000; ++k) grid.push_back(-4.0 + 0.008 * k);
  for (auto _ : s) benchmark::DoNotOptimize(affinity_conditional(c, grid, {}, mode(s)));
}

}  // namespace

BENCHMARK(BM_PosteriorAffinity)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PosteriorYouden)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConditionalAffinity)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AffinityConditionalKnown)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
