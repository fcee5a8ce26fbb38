#pragma once

#include <Eigen/Dense>
#include <limits>

#include "oosinfer/learners.hpp"
#include "oosinfer/losses.hpp"

namespace oosinfer {

/// Out-of-sample risk with the pieces standard inference needs. delta and
/// er are only filled in simulation contexts where the truth is known.
struct OosRiskReport {
  double empirical_risk = std::numeric_limits<double>::quiet_NaN();
  double delta = std::numeric_limits<double>::quiet_NaN();
  double er = std::numeric_limits<double>::quiet_NaN();
  double true_risk = std::numeric_limits<double>::quiet_NaN();
  double omega_hat = std::numeric_limits<double>::quiet_NaN();
  double ci_lo = std::numeric_limits<double>::quiet_NaN();
  double ci_hi = std::numeric_limits<double>::quiet_NaN();
  double alpha = std::numeric_limits<double>::quiet_NaN();
  int n_oos = 0;
  bool truth_known = false;
  bool covered = false;
  bool degenerate_variance = false;
};

/// Loss sequence {f_t(theta_hat)} over the evaluation rows.
Eigen::VectorXd oos_losses(const FittedModel& model, const LossSpec& loss,
                           const DesignMatrix& test_design);

/// Same, slicing the evaluation rows out of a full design via the split.
Eigen::VectorXd oos_losses(const FittedModel& model, const LossSpec& loss,
                           const DesignMatrix& design, const SplitPlan& split);

constexpr int kAutoBandwidth = -1;

/// Bartlett-kernel long-run variance of a demeaned sequence. The automatic
/// bandwidth is floor(4 (P/100)^{2/9}); bandwidth 0 gives the plain sample
/// variance. The estimate is floored at gamma0 * 1e-12; an all-constant
/// sequence yields 0 with the degenerate flag set.
struct LrvEstimate {
  double omega = 0.0;
  int bandwidth = 0;
  bool degenerate = false;
};

LrvEstimate long_run_variance(const Eigen::VectorXd& losses, int bandwidth = kAutoBandwidth);

struct ConfidenceInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool degenerate = false;  // zero-width interval
};

/// risk +- z_{1-alpha/2} sqrt(omega / P)
ConfidenceInterval confidence_interval(double empirical_risk, double omega_hat, int n_oos,
                                       double alpha);

/// Delta = sqrt(P)(risk_hat - true_risk) and the estimation-risk term
/// ER = sqrt(P) * mean(f(theta_hat) - f(theta_0)), plus the long-run
/// variance and the CI at level alpha. true_theta is the linear parameter
/// the DGP used.
OosRiskReport delta_and_er(const FittedModel& model, const LossSpec& loss,
                           const DesignMatrix& design, const SplitPlan& split,
                           const Eigen::VectorXd& true_theta, double true_risk,
                           double alpha = 0.05, int bandwidth = kAutoBandwidth);

}  // namespace oosinfer
