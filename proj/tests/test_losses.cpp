#include <doctest.h>

#include <cmath>

#include "oosinfer/losses.hpp"
#include "oosinfer/rng.hpp"

using namespace oosinfer;

TEST_CASE("catalog values") {
  CHECK(loss_value(LossSpec::mspe(), 1.0, 0.0) == doctest::Approx(0.5));
  CHECK(loss_value(LossSpec::cross_entropy(), 0.0, 0.0) == doctest::Approx(std::log(2.0)));
  CHECK(loss_value(LossSpec::covariance(), 1.0, 3.0) == doctest::Approx(6.0));
  CHECK(loss_value(LossSpec::mad(), 2.0, -1.0) == doctest::Approx(3.0));
  CHECK(loss_value(LossSpec::logcosh(), 1.0, 1.0) == doctest::Approx(0.0));
}

TEST_CASE("catalog scores") {
  CHECK(score(LossSpec::huber(1.0), 2.0, 0.0) == doctest::Approx(1.0));  // |eps|>delta
  CHECK(score(LossSpec::logcosh(), 1.0, 1.0) == doctest::Approx(0.0));
  CHECK(score(LossSpec::cross_entropy(), 1.0, 0.0) == doctest::Approx(0.5));
  CHECK(score(LossSpec::mad(), 0.0, 1.0) == doctest::Approx(0.5));   // eps < 0
  CHECK(score(LossSpec::mad(), 1.0, 0.0) == doctest::Approx(-0.5));  // eps > 0
}

TEST_CASE("huber is continuous at the switch point") {
  const LossSpec h = LossSpec::huber(1.345);
  const double at = loss_value(h, 1.345, 0.0);
  const double just_past = loss_value(h, 1.345 + 1e-9, 0.0);
  CHECK(at == doctest::Approx(just_past).epsilon(1e-6));
}

TEST_CASE("cross entropy stays finite at extreme scores") {
  CHECK(std::isfinite(loss_value(LossSpec::cross_entropy(), 1.0, 500.0)));
  CHECK(std::isfinite(loss_value(LossSpec::cross_entropy(), 0.0, -500.0)));
  CHECK(loss_value(LossSpec::cross_entropy(), 1.0, 500.0) == doctest::Approx(0.0).epsilon(1e-10));
  CHECK_THROWS_AS(loss_value(LossSpec::cross_entropy(), 0.5, 0.0), std::domain_error);
}

TEST_CASE("asmspe with equal weights is twice the mspe") {
  const LossSpec a = LossSpec::asmspe(0.7, 0.7);
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    const double y = rng.normal(0, 2), m = rng.normal(0, 2);
    CHECK(loss_value(a, y, m) ==
          doctest::Approx(2.0 * 0.7 * loss_value(LossSpec::mspe(), y, m)).epsilon(1e-12));
  }
}

TEST_CASE("score matches the finite difference of the loss in m") {
  Rng rng(99);
  const std::vector<LossSpec> catalog{
      LossSpec::mspe(),       LossSpec::mad(),          LossSpec::huber(1.345),
      LossSpec::asmspe(2, 1), LossSpec::logcosh(),      LossSpec::cross_entropy(),
      LossSpec::covariance()};
  const double h = 1e-6;
  for (const LossSpec& spec : catalog) {
    const double factor = score_to_gradient_factor(spec.kind);
    int checked = 0;
    while (checked < 100) {
      double y = rng.normal(0, 2);
      const double m = rng.normal(0, 2);
      if (spec.kind == LossKind::CrossEntropy) y = rng.bernoulli(0.5) ? 1.0 : 0.0;
      const double eps = y - m;
      // stay away from the MAD kink at 0 and the Huber switch at delta
      if (spec.kind == LossKind::MAD || spec.kind == LossKind::ASMSPE) {
        if (std::abs(eps) < 1e-3) continue;
      }
      if (spec.kind == LossKind::Huber && std::abs(std::abs(eps) - spec.delta) < 1e-3) continue;
      const double fd = (loss_value(spec, y, m + h) - loss_value(spec, y, m - h)) / (2.0 * h);
      const double analytic = factor * score(spec, y, m);
      CHECK(fd == doctest::Approx(analytic).epsilon(1e-6));
      ++checked;
    }
  }
}

TEST_CASE("zero mean score diagnostic on exact cancellation") {
  Eigen::VectorXd resid(2);
  resid << -1.0, 1.0;
  const Eigen::MatrixXd w = Eigen::MatrixXd::Ones(2, 1);
  const ScoreDiagnostic d = zero_mean_score_diagnostic(LossSpec::mspe(), resid, w);
  CHECK(d.mean_score_norm == doctest::Approx(0.0));
  CHECK(!d.violation);
  CHECK(d.small_sample);
}

TEST_CASE("zero mean score diagnostic on a shifted sample") {
  Eigen::VectorXd resid(2);
  resid << 1.0, 1.0;
  const Eigen::MatrixXd w = Eigen::MatrixXd::Ones(2, 1);
  const ScoreDiagnostic d = zero_mean_score_diagnostic(LossSpec::mspe(), resid, w);
  CHECK(d.mean_score_norm == doctest::Approx(1.0));
}

TEST_CASE("mad diagnostic rarely flags a median-zero law") {
  Rng rng(2024);
  int violations = 0;
  const int trials = 300, n = 200;
  for (int trial = 0; trial < trials; ++trial) {
    Eigen::VectorXd resid(n);
    for (int i = 0; i < n; ++i) resid(i) = rng.normal();
    const Eigen::MatrixXd w = Eigen::MatrixXd::Ones(n, 1);
    if (zero_mean_score_diagnostic(LossSpec::mad(), resid, w).violation) ++violations;
  }
  // studentized magnitude is asymptotically |N(0,1)|: above 3 about 0.3%
  CHECK(violations <= 6);
}

TEST_CASE("diagnostic rejects empty and misaligned inputs") {
  const Eigen::VectorXd empty;
  CHECK_THROWS_AS(zero_mean_score_diagnostic(LossSpec::mspe(), empty, Eigen::MatrixXd()),
                  std::domain_error);
  Eigen::VectorXd resid(2);
  resid << 1.0, -1.0;
  CHECK_THROWS_AS(zero_mean_score_diagnostic(LossSpec::mspe(), resid, Eigen::MatrixXd::Ones(3, 1)),
                  std::domain_error);
}

TEST_CASE("loss parsing from names") {
  CHECK(LossSpec::from_name("huber", 2.0).delta == 2.0);
  CHECK(LossSpec::from_name("mspe").kind == LossKind::MSPE);
  CHECK_THROWS(LossSpec::from_name("nope"));
}
