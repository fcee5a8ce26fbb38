#include <doctest.h>

#include <cstring>

#include "oosinfer/errors.hpp"
#include "oosinfer/learners.hpp"
#include "oosinfer/rng.hpp"
#include "oracles.hpp"

using namespace oosinfer;

namespace {

// Design with given train block; two throwaway test rows keep the split valid.
DesignMatrix make_design(const Eigen::MatrixXd& Xtr, const Eigen::VectorXd& ytr,
                         bool intercept = false) {
  DesignMatrix d;
  const Eigen::Index n = Xtr.rows(), p = Xtr.cols();
  d.X.resize(n + 2, p);
  d.X.topRows(n) = Xtr;
  d.X.bottomRows(2).setOnes();
  d.y.resize(n + 2);
  d.y.head(n) = ytr;
  d.y.tail(2).setZero();
  d.has_intercept = intercept;
  d.max_lag = 0;
  return d;
}

SplitPlan plan_for(const DesignMatrix& d) {
  return split_by_insample(static_cast<int>(d.rows()), static_cast<int>(d.rows()) - 2);
}

DesignMatrix random_regression(int n, int p, std::uint64_t seed, Eigen::VectorXd* theta_out) {
  Rng rng(seed);
  DesignMatrix d;
  d.X.resize(n, p);
  d.y.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) d.X(i, j) = rng.normal();
  }
  Eigen::VectorXd theta(p);
  for (int j = 0; j < p; ++j) theta(j) = rng.uniform(-2.0, 2.0);
  for (int i = 0; i < n; ++i) d.y(i) = d.X.row(i).dot(theta) + rng.normal();
  d.has_intercept = false;
  d.max_lag = 0;
  if (theta_out) *theta_out = theta;
  return d;
}

}  // namespace

TEST_CASE("ols recovers an exact linear relation") {
  Eigen::MatrixXd X(4, 1);
  X << 1, 2, 3, 4;
  Eigen::VectorXd y = 2.0 * X.col(0);
  const DesignMatrix d = make_design(X, y);
  const FittedModel m = fit_ols(d, plan_for(d));
  CHECK(m.theta(0) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("ols solves the hand-computed normal equations") {
  Eigen::MatrixXd X(2, 1);
  X << 1, 1;
  Eigen::VectorXd y(2);
  y << 1, 2;
  const DesignMatrix d = make_design(X, y);
  const FittedModel m = fit_ols(d, plan_for(d));
  CHECK(m.theta(0) == doctest::Approx(1.5));
}

TEST_CASE("ols residual orthogonality") {
  const DesignMatrix d = random_regression(120, 6, 17, nullptr);
  const SplitPlan split = split_by_insample(120, 100);
  const FittedModel m = fit_ols(d, split);
  const auto X = d.X.topRows(100);
  const auto y = d.y.head(100);
  const Eigen::VectorXd moment = X.transpose() * (y - X * m.theta) / 100.0;
  CHECK(moment.lpNorm<Eigen::Infinity>() < 1e-8);
}

TEST_CASE("ols rejects duplicated columns") {
  Eigen::MatrixXd X(6, 2);
  X.col(0) << 1, 2, 3, 4, 5, 6;
  X.col(1) = X.col(0);
  Eigen::VectorXd y = X.col(0);
  const DesignMatrix d = make_design(X, y);
  CHECK_THROWS_AS(fit_ols(d, plan_for(d)), SingularDesignError);
}

TEST_CASE("ols refuses the high-dimensional regime") {
  const DesignMatrix d = random_regression(20, 30, 3, nullptr);
  CHECK_THROWS_AS(fit_ols(d, split_by_insample(20, 15)), SingularDesignError);
}

TEST_CASE("ridge shrinks the hand example") {
  Eigen::MatrixXd X(2, 1);
  X << 1, 1;
  Eigen::VectorXd y(2);
  y << 1, 2;
  const DesignMatrix d = make_design(X, y);
  const FittedModel m = fit_ridge(d, plan_for(d), 1.0);
  CHECK(m.theta(0) == doctest::Approx(0.75));
}

TEST_CASE("ridge at lambda 0 matches ols; heavy lambda kills the fit") {
  const DesignMatrix d = random_regression(80, 5, 23, nullptr);
  const SplitPlan split = split_by_insample(80, 60);
  const FittedModel ols = fit_ols(d, split);
  const FittedModel r0 = fit_ridge(d, split, 0.0);
  CHECK((ols.theta - r0.theta).lpNorm<Eigen::Infinity>() < 1e-8);
  const FittedModel heavy = fit_ridge(d, split, 1e9);
  CHECK(heavy.theta.norm() < 1e-6);
  CHECK_THROWS_AS(fit_ridge(d, split, -0.5), std::domain_error);
}

TEST_CASE("ridge satisfies its normal equations across lambda") {
  const DesignMatrix d = random_regression(90, 8, 29, nullptr);
  const SplitPlan split = split_by_insample(90, 70);
  const auto X = d.X.topRows(70);
  const auto y = d.y.head(70);
  const Eigen::MatrixXd gram = X.transpose() * X / 70.0;
  const Eigen::VectorXd xty = X.transpose() * y / 70.0;
  for (double lambda : {0.0, 1e-4, 0.1, 1.0, 50.0}) {
    const FittedModel m = fit_ridge(d, split, lambda);
    Eigen::MatrixXd a = gram;
    a.diagonal().array() += lambda;
    const double resid = (a * m.theta - xty).norm() / std::max(1.0, xty.norm());
    CHECK(resid < 1e-8);
  }
}

TEST_CASE("blocked cv picks a grid lambda deterministically") {
  const DesignMatrix d = random_regression(200, 10, 31, nullptr);
  const SplitPlan split = split_by_insample(200, 160);
  BlockedCvConfig cv;
  const FittedModel a = fit_ridge_cv(d, split, cv);
  const FittedModel b = fit_ridge_cv(d, split, cv);
  CHECK(a.lambda_used == b.lambda_used);
  bool on_grid = false;
  for (double l : cv.lambda_grid) {
    if (l == a.lambda_used) on_grid = true;
  }
  CHECK(on_grid);
  CHECK(std::memcmp(a.theta.data(), b.theta.data(),
                    sizeof(double) * static_cast<std::size_t>(a.theta.size())) == 0);
}

TEST_CASE("lasso soft-threshold fixed points") {
  Eigen::MatrixXd X(2, 1);
  X << 1, 1;
  Eigen::VectorXd y(2);
  y << 1, 1;  // train moments: E[x^2] = 1, E[xy] = 1
  const DesignMatrix d = make_design(X, y);
  const FittedModel m1 = fit_lasso(d, plan_for(d), 1.0);
  CHECK(m1.theta(0) == doctest::Approx(0.5).epsilon(1e-8));
  const FittedModel m3 = fit_lasso(d, plan_for(d), 3.0);
  CHECK(m3.theta(0) == doctest::Approx(0.0));
  CHECK_THROWS_AS(fit_lasso(d, plan_for(d), -1.0), std::domain_error);
}

TEST_CASE("lasso at lambda 0 matches ols") {
  const DesignMatrix d = random_regression(60, 2, 41, nullptr);
  const SplitPlan split = split_by_insample(60, 50);
  const FittedModel ols = fit_ols(d, split);
  const FittedModel l0 = fit_lasso(d, split, 0.0);
  CHECK((ols.theta - l0.theta).lpNorm<Eigen::Infinity>() < 1e-6);
}

TEST_CASE("lasso kkt conditions and monotone objective at exit") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL}) {
    const DesignMatrix d = random_regression(80, 12, 100 + seed, nullptr);
    const SplitPlan split = split_by_insample(80, 64);
    Rng lam_rng(seed);
    const double lambda = lam_rng.uniform(0.05, 1.0);
    const FittedModel m = fit_lasso(d, split, lambda);
    CHECK(m.diagnostics.converged);
    CHECK(m.diagnostics.kkt_max_violation < 1e-6);
    CHECK(lasso_kkt_violation(d, split, m, lambda) < 1e-6);
    const auto& trace = m.diagnostics.objective_trace;
    for (std::size_t i = 1; i < trace.size(); ++i) {
      CHECK(trace[i] <= trace[i - 1] + 1e-12);
    }
  }
}

TEST_CASE("lasso agrees with the two-dimensional grid oracle") {
  Rng rng(77);
  for (int problem = 0; problem < 5; ++problem) {
    Eigen::MatrixXd X(40, 2);
    Eigen::VectorXd y(40);
    for (int i = 0; i < 40; ++i) {
      X(i, 0) = rng.normal();
      X(i, 1) = 0.3 * X(i, 0) + rng.normal();
      y(i) = 1.5 * X(i, 0) - 0.8 * X(i, 1) + rng.normal();
    }
    const double lambda = rng.uniform(0.05, 1.0);
    const DesignMatrix d = make_design(X, y);
    const FittedModel m = fit_lasso(d, plan_for(d), lambda);
    const Eigen::Vector2d oracle = testing::lasso_grid_minimizer(X, y, lambda);
    CHECK(std::abs(m.theta(0) - oracle(0)) < 2e-3);
    CHECK(std::abs(m.theta(1) - oracle(1)) < 2e-3);
  }
}

TEST_CASE("lasso refits are bit identical") {
  const DesignMatrix d = random_regression(100, 20, 55, nullptr);
  const SplitPlan split = split_by_insample(100, 80);
  const FittedModel a = fit_lasso(d, split, 0.2);
  const FittedModel b = fit_lasso(d, split, 0.2);
  CHECK(std::memcmp(a.theta.data(), b.theta.data(),
                    sizeof(double) * static_cast<std::size_t>(a.theta.size())) == 0);
}

TEST_CASE("lasso rate rule uses sqrt(log p / R)") {
  const DesignMatrix d = random_regression(64, 10, 61, nullptr);
  const SplitPlan split = split_by_insample(64, 50);
  const FittedModel m = fit_lasso(d, split, LambdaRule::sqrt_logp_over_r());
  CHECK(m.lambda_used == doctest::Approx(std::sqrt(std::log(10.0) / 50.0)));
}

TEST_CASE("fast rate diagnostic vanishes at the truth") {
  Eigen::VectorXd theta;
  const DesignMatrix d = random_regression(50, 4, 71, &theta);
  FittedModel m;
  m.kind = LearnerKind::Ols;
  m.theta = theta;
  const Eigen::VectorXd theta_copy = theta;
  const double v = fast_rate_diagnostic(
      m, [&theta_copy](const Eigen::Ref<const Eigen::VectorXd>& x) { return theta_copy.dot(x); },
      d.X.bottomRows(10));
  CHECK(v == doctest::Approx(0.0));
}

TEST_CASE("unpenalized intercept survives heavy ridge and lasso penalties") {
  Rng rng(83);
  Eigen::MatrixXd X(50, 2);
  Eigen::VectorXd y(50);
  for (int i = 0; i < 50; ++i) {
    X(i, 0) = 1.0;
    X(i, 1) = rng.normal();
    y(i) = 3.0 + 0.5 * X(i, 1) + 0.1 * rng.normal();
  }
  DesignMatrix d = make_design(X, y, true);
  d.X.bottomRows(2).col(0).setOnes();
  const SplitPlan split = plan_for(d);
  const FittedModel ridge = fit_ridge(d, split, 1e6);
  CHECK(ridge.theta(0) == doctest::Approx(y.mean()).epsilon(1e-3));
  const FittedModel lasso = fit_lasso(d, split, 50.0);
  CHECK(lasso.theta(1) == doctest::Approx(0.0));
  CHECK(lasso.theta(0) == doctest::Approx(y.mean()).epsilon(1e-6));
}
