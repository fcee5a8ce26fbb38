#include <benchmark/benchmark.h>

#include "oosinfer/dgp.hpp"
#include "oosinfer/mdh.hpp"
#include "oosinfer/oos.hpp"
#include "oosinfer/rng.hpp"

using namespace oosinfer;

static void BM_GarchDraw(benchmark::State& state) {
  DgpSpec spec;
  spec.kind = DgpKind::Garch11;
  spec.T = static_cast<int>(state.range(0));
  spec.seed = 99;
  for (auto _ : state) {
    SimDraw draw = generate(spec);
    benchmark::DoNotOptimize(draw.series->values().data());
  }
}
BENCHMARK(BM_GarchDraw)->Arg(1000)->Arg(10000);

static void BM_BartlettLrv(benchmark::State& state) {
  Rng rng(5);
  Eigen::VectorXd seq(state.range(0));
  for (Eigen::Index i = 0; i < seq.size(); ++i) seq(i) = rng.normal();
  for (auto _ : state) {
    LrvEstimate lrv = long_run_variance(seq);
    benchmark::DoNotOptimize(lrv.omega);
  }
}
BENCHMARK(BM_BartlettLrv)->Arg(1000)->Arg(10000);

static void BM_AutoPortmanteau(benchmark::State& state) {
  Rng rng(11);
  std::vector<double> x(static_cast<std::size_t>(state.range(0)));
  for (double& v : x) v = rng.normal();
  for (auto _ : state) {
    MdhTestReport r = auto_portmanteau(x);
    benchmark::DoNotOptimize(r.statistic);
  }
}
BENCHMARK(BM_AutoPortmanteau)->Arg(500)->Arg(2000);

static void BM_BuildMdhFeatures(benchmark::State& state) {
  DgpSpec spec;
  spec.kind = DgpKind::Garch11;
  spec.T = 1000;
  spec.seed = 2;
  const Series series = *generate(spec).series;
  for (auto _ : state) {
    DesignMatrix d = build_features(series, 30, true, {2, 3, 4});
    benchmark::DoNotOptimize(d.X.data());
  }
}
BENCHMARK(BM_BuildMdhFeatures)->Unit(benchmark::kMillisecond);
