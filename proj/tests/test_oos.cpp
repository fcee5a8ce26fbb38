#include <doctest.h>

#include <cmath>

#include "oosinfer/dgp.hpp"
#include "oosinfer/oos.hpp"
#include "oosinfer/rng.hpp"

using namespace oosinfer;

namespace {

FittedModel linear_model(const Eigen::VectorXd& theta) {
  FittedModel m;
  m.kind = LearnerKind::Ols;
  m.theta = theta;
  return m;
}

}  // namespace

TEST_CASE("oos losses of a perfect predictor vanish") {
  DesignMatrix test;
  test.X = Eigen::MatrixXd::Random(6, 2);
  Eigen::VectorXd theta(2);
  theta << 1.0, -2.0;
  test.y = test.X * theta;
  const Eigen::VectorXd f = oos_losses(linear_model(theta), LossSpec::mspe(), test);
  CHECK(f.lpNorm<Eigen::Infinity>() == doctest::Approx(0.0));
}

TEST_CASE("oos losses of the zero predictor are half squared targets") {
  DesignMatrix test;
  test.X = Eigen::MatrixXd::Ones(2, 1);
  test.y.resize(2);
  test.y << 1.0, -1.0;
  const Eigen::VectorXd f =
      oos_losses(linear_model(Eigen::VectorXd::Zero(1)), LossSpec::mspe(), test);
  CHECK(f(0) == doctest::Approx(0.5));
  CHECK(f(1) == doctest::Approx(0.5));
  const Eigen::VectorXd g =
      oos_losses(linear_model(Eigen::VectorXd::Zero(1)), LossSpec::covariance(), test);
  CHECK(g.lpNorm<Eigen::Infinity>() == doctest::Approx(0.0));
  DesignMatrix empty;
  empty.X.resize(0, 1);
  empty.y.resize(0);
  CHECK_THROWS_AS(oos_losses(linear_model(Eigen::VectorXd::Zero(1)), LossSpec::mspe(), empty),
                  std::domain_error);
}

TEST_CASE("bartlett long-run variance by hand") {
  Eigen::VectorXd seq(4);
  seq << 1, -1, 1, -1;
  const LrvEstimate lrv = long_run_variance(seq, 1);
  CHECK(lrv.omega == doctest::Approx(0.25));
  CHECK(lrv.bandwidth == 1);
}

TEST_CASE("bandwidth zero is the sample variance") {
  Rng rng(8);
  Eigen::VectorXd seq(50);
  for (int i = 0; i < 50; ++i) seq(i) = rng.normal(1.0, 2.0);
  const LrvEstimate lrv = long_run_variance(seq, 0);
  const double var = (seq.array() - seq.mean()).square().sum() / 50.0;
  CHECK(lrv.omega == doctest::Approx(var).epsilon(1e-12));
}

TEST_CASE("long iid sample has unit long-run variance") {
  Rng rng(515);
  Eigen::VectorXd seq(20000);
  for (int i = 0; i < seq.size(); ++i) seq(i) = rng.normal();
  const LrvEstimate lrv = long_run_variance(seq);
  CHECK(std::abs(lrv.omega - 1.0) < 0.1);
}

TEST_CASE("long-run variance is shift invariant and floors at zero") {
  Rng rng(9);
  Eigen::VectorXd seq(64);
  for (int i = 0; i < 64; ++i) seq(i) = rng.normal();
  const double a = long_run_variance(seq).omega;
  const double b = long_run_variance(seq.array() + 123.456).omega;
  CHECK(a == doctest::Approx(b).epsilon(1e-9));

  const LrvEstimate flat = long_run_variance(Eigen::VectorXd::Constant(16, 3.0));
  CHECK(flat.omega == 0.0);
  CHECK(flat.degenerate);
}

TEST_CASE("confidence interval at the normal quantile") {
  const ConfidenceInterval ci = confidence_interval(0.0, 1.0, 100, 0.05);
  CHECK(ci.lo == doctest::Approx(-0.196).epsilon(1e-3));
  CHECK(ci.hi == doctest::Approx(0.196).epsilon(1e-3));
  const ConfidenceInterval degenerate = confidence_interval(1.0, 0.0, 100, 0.05);
  CHECK(degenerate.lo == 1.0);
  CHECK(degenerate.hi == 1.0);
  CHECK(degenerate.degenerate);
}

TEST_CASE("delta and er at the truth, and the decomposition identity") {
  DgpSpec spec;
  spec.kind = DgpKind::FastRatesLinear;
  spec.T = 200;
  spec.seed = 99;
  const SimDraw draw = generate(spec);
  const SplitPlan split = split_by_ratio(200, 1.0);
  const LossSpec spe = LossSpec::asmspe(1.0, 1.0);  // plain squared error

  // at the truth the estimation risk vanishes exactly
  const OosRiskReport at_truth = delta_and_er(linear_model(draw.theta0), spe, *draw.design, split,
                                              draw.theta0, draw.true_risk);
  CHECK(at_truth.er == 0.0);

  // decomposition: delta = sqrt(P)(mean f(theta0) - risk) + er
  const FittedModel fit = fit_lasso(*draw.design, split, LambdaRule::sqrt_logp_over_r());
  const OosRiskReport r =
      delta_and_er(fit, spe, *draw.design, split, draw.theta0, draw.true_risk);
  const Eigen::VectorXd f0 = oos_losses(linear_model(draw.theta0), spe, *draw.design, split);
  const double base = std::sqrt(static_cast<double>(split.P)) * (f0.mean() - draw.true_risk);
  CHECK(r.delta == doctest::Approx(base + r.er).epsilon(1e-10));
  CHECK(r.n_oos == split.P);

  Eigen::VectorXd wrong_dim(3);
  wrong_dim << 1, 2, 3;
  CHECK_THROWS_AS(delta_and_er(fit, spe, *draw.design, split, wrong_dim, 1.0),
                  std::domain_error);
}

TEST_CASE("pure clt coverage of the confidence interval") {
  Rng rng(2718);
  const int reps = 2000, P = 200;
  int covered = 0;
  for (int rep = 0; rep < reps; ++rep) {
    Eigen::VectorXd losses(P);
    for (int i = 0; i < P; ++i) losses(i) = rng.normal();
    const LrvEstimate lrv = long_run_variance(losses);
    const ConfidenceInterval ci = confidence_interval(losses.mean(), lrv.omega, P, 0.05);
    if (ci.lo <= 0.0 && 0.0 <= ci.hi) ++covered;
  }
  const double coverage = static_cast<double>(covered) / reps;
  CHECK(coverage > 0.93);
  CHECK(coverage < 0.97);
}
