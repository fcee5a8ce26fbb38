#pragma once

#include <Eigen/Dense>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "oosinfer/features.hpp"
#include "oosinfer/series.hpp"

namespace oosinfer {

enum class LearnerKind { Ols, Ridge, Lasso, Dnn };
std::string to_string(LearnerKind k);

struct DnnArchitecture;  // dnn.hpp

struct FitDiagnostics {
  int iterations = 0;
  double final_objective = std::numeric_limits<double>::quiet_NaN();
  bool converged = true;
  double kkt_max_violation = 0.0;        // Lasso stationarity residual at exit
  std::vector<double> objective_trace;   // one entry per sweep/epoch
  std::vector<std::string> warnings;
};

/// A fitted in-sample estimator: parameter vector, prediction map and fit
/// diagnostics. Immutable and cheap to share across replications.
struct FittedModel {
  LearnerKind kind = LearnerKind::Ols;
  Eigen::VectorXd theta;   // flattened parameter bundle for the network
  double lambda_used = 0.0;
  FitDiagnostics diagnostics;
  std::shared_ptr<const DnnArchitecture> arch;  // set for kind == Dnn

  double predict(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  Eigen::VectorXd predict_all(const Eigen::Ref<const Eigen::MatrixXd>& X) const;
};

/// Least squares on the in-sample rows. Only offered when the training
/// sample exceeds the parameter count; a Gram condition number above 1e12
/// raises SingularDesignError (use Ridge instead).
FittedModel fit_ols(const DesignMatrix& design, const SplitPlan& split);

/// Blocked time-series cross-validation: the training sample is cut into
/// k contiguous blocks, each block is split chronologically into its own
/// train/test sub-segments, and the sub-test MSPEs are averaged per
/// lambda.
struct BlockedCvConfig {
  int k = 2;
  double train_fraction = 0.8;
  std::vector<double> lambda_grid = default_lambda_grid();

  static std::vector<double> default_lambda_grid();  // 20 points, 1e-4..1e2
};

/// theta = argmin (1/R) sum (y - theta'x)^2 + lambda |theta|^2, solved
/// from (Gram/R + lambda D) theta = X'y/R. The intercept column is not
/// penalized.
FittedModel fit_ridge(const DesignMatrix& design, const SplitPlan& split, double lambda);
FittedModel fit_ridge_cv(const DesignMatrix& design, const SplitPlan& split,
                         const BlockedCvConfig& cv);

struct LassoOptions {
  double tol = 1e-8;       // max coordinate change per sweep
  int max_sweeps = 10000;
  double kkt_tol = 1e-6;
};

/// Penalty rules for the Lasso: the plain sqrt(log p / R) rate, or the
/// same scaled by a constant.
struct LambdaRule {
  double scale = 1.0;
  static LambdaRule sqrt_logp_over_r() { return {1.0}; }
  static LambdaRule scaled(double c) { return {c}; }
};

/// theta = argmin (1/R) sum (y - theta'x)^2 + lambda |theta|_1 by cyclic
/// coordinate descent with soft thresholding, warm-started at zero. The
/// intercept is not penalized. Non-convergence returns converged=false
/// with a warning, never silently.
FittedModel fit_lasso(const DesignMatrix& design, const SplitPlan& split, double lambda,
                      const LassoOptions& options = {});
FittedModel fit_lasso(const DesignMatrix& design, const SplitPlan& split, LambdaRule rule,
                      const LassoOptions& options = {});

/// sum_j min(|theta_j| / tau, 1)
double clipped_norm(const Eigen::VectorXd& theta, double tau);

using TruthPredictor = std::function<double(const Eigen::Ref<const Eigen::VectorXd>&)>;

/// sqrt(P) * mean over the test rows of (m(theta_hat,x) - m(theta_0,x))^2;
/// the empirical surrogate of the fast-rate quantity (simulation only,
/// needs the true predictor).
double fast_rate_diagnostic(const FittedModel& model, const TruthPredictor& truth,
                            const Eigen::Ref<const Eigen::MatrixXd>& X_test);

/// Max KKT violation of the Lasso objective at theta (fresh residuals).
double lasso_kkt_violation(const DesignMatrix& design, const SplitPlan& split,
                           const FittedModel& model, double lambda);

}  // namespace oosinfer
