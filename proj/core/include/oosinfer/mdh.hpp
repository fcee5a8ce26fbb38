#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>

#include "oosinfer/features.hpp"
#include "oosinfer/learners.hpp"
#include "oosinfer/series.hpp"

namespace oosinfer {

enum class MdhLearner { Ols, RidgeCv };

/// Result of one martingale-difference test. For the prediction-based
/// test, statistic is the self-normalized t and p_value its one-sided
/// upper-tail normal p-value. For the portmanteau benchmark, statistic is
/// the selected robust Box-Pierce value referred to chi-squared(1), and
/// selected_lag the automatically chosen lag.
struct MdhTestReport {
  std::string method;  // "ols", "ridge" or "ap"
  double statistic = 0.0;
  double p_value = 1.0;
  int n_oos = 0;
  int feature_dim = 0;
  int selected_lag = 0;
  double alpha = 0.05;
  bool reject = false;
  std::uint64_t seed = 0;
  std::string config_hash;
};

struct MdhOptions {
  FeatureConfig features;  // ridge design: 30 lags, pairs, powers {2,3,4}
  int ols_lags = 30;       // the OLS benchmark uses intercept + linear lags
  BlockedCvConfig cv;
  double alpha = 0.05;
  double degenerate_tol = 1e-12;
  std::uint64_t seed = 0;

  // The ridge design standardizes by default: power features of heavy
  // tailed series are orders of magnitude apart in scale, and an
  // unweighted ridge penalty would be dominated by them.
  MdhOptions() { features.standardize = true; }
};

/// sqrt(P) * mean(g) / sqrt(mean(g^2)) for the out-of-sample products
/// g_t = Y_t * (X_t' theta_hat).
double self_normalized_t(const Eigen::VectorXd& g);

/// Out-of-sample MDH test: fit on observations 1..R only, form
/// g_t = Y_t * prediction on the P evaluation observations, reject for a
/// large positive self-normalized statistic. A numerically zero
/// coefficient vector raises DegenerateEstimatorError (ridge keeps the
/// estimator off zero).
MdhTestReport mdh_test(const Series& series, const SplitPlan& split, MdhLearner learner,
                       const MdhOptions& options = {});

/// Same test on a prebuilt design (used by the simulation driver to share
/// one feature matrix across splits).
MdhTestReport mdh_test_on_design(const DesignMatrix& design, const SplitPlan& split,
                                 MdhLearner learner, const MdhOptions& options = {});

struct ApOptions {
  int max_lag = 0;  // 0 = automatic bound min(floor(10 log10 n), 50)
  double alpha = 0.05;
};

/// Automatic Portmanteau test on a segment: heteroskedasticity-robust
/// Box-Pierce statistic with a data-driven lag that maximizes the
/// penalized statistic, referred to the chi-squared(1) upper tail.
MdhTestReport auto_portmanteau(std::span<const double> segment, const ApOptions& options = {});

}  // namespace oosinfer
