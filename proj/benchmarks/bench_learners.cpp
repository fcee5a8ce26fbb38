#include <benchmark/benchmark.h>

#include "oosinfer/dgp.hpp"
#include "oosinfer/dnn.hpp"
#include "oosinfer/learners.hpp"

using namespace oosinfer;

static void BM_LassoRateRule(benchmark::State& state) {
  DgpSpec spec;
  spec.kind = DgpKind::FastRatesLinear;
  spec.T = static_cast<int>(state.range(0));
  spec.seed = 12345;
  const SimDraw draw = generate(spec);
  const SplitPlan split = split_by_ratio(spec.T, 1.0);
  for (auto _ : state) {
    FittedModel m = fit_lasso(*draw.design, split, LambdaRule::sqrt_logp_over_r());
    benchmark::DoNotOptimize(m.theta.data());
  }
}
BENCHMARK(BM_LassoRateRule)->Arg(500)->Arg(1000)->Arg(2000)->Unit(benchmark::kMillisecond);

static void BM_RidgeBlockedCv(benchmark::State& state) {
  DgpSpec spec;
  spec.kind = DgpKind::Garch11;
  spec.T = static_cast<int>(state.range(0));
  spec.seed = 7;
  const Series series = *generate(spec).series;
  const DesignMatrix design = build_features(series, 30, true, {2, 3, 4});
  const SplitPlan split = split_by_ratio(spec.T, 1.0);
  BlockedCvConfig cv;
  for (auto _ : state) {
    FittedModel m = fit_ridge_cv(design, split, cv);
    benchmark::DoNotOptimize(m.theta.data());
  }
}
BENCHMARK(BM_RidgeBlockedCv)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_DnnEpoch(benchmark::State& state) {
  DgpSpec spec;
  spec.kind = DgpKind::BinaryLogistic;
  spec.T = 1000;
  spec.seed = 3;
  const SimDraw draw = generate(spec);
  const SplitPlan split = split_by_ratio(spec.T, 0.25);
  const DnnArchitecture arch = DnnArchitecture::mlp(3, 2, 8, 10.0, 5.0, 0.05);
  DnnOptions opt;
  opt.epochs = 1;
  opt.seed = 1;
  for (auto _ : state) {
    FittedModel m = fit_dnn(*draw.design, split, arch, LossSpec::cross_entropy(), opt, 1e-4);
    benchmark::DoNotOptimize(m.theta.data());
  }
}
BENCHMARK(BM_DnnEpoch)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
