#pragma once

#include <Eigen/Dense>
#include <string>

namespace oosinfer {

enum class LossKind { MSPE, MAD, Huber, ASMSPE, LogCosh, CrossEntropy, Covariance };

/// A prediction loss l(y,m) together with its score function psi. The
/// score is stored in the conventional epsilon parameterization (see
/// `score`); `score_to_gradient_factor` records how it relates to dl/dm.
struct LossSpec {
  LossKind kind = LossKind::MSPE;
  double delta = 1.345;  // Huber switch point
  double alpha = 1.0;    // ASMSPE weight for positive errors
  double beta = 1.0;     // ASMSPE weight for negative errors

  static LossSpec mspe() { return {LossKind::MSPE}; }
  static LossSpec mad() { return {LossKind::MAD}; }
  static LossSpec huber(double delta);
  static LossSpec asmspe(double alpha, double beta);
  static LossSpec logcosh() { return {LossKind::LogCosh}; }
  static LossSpec cross_entropy() { return {LossKind::CrossEntropy}; }
  static LossSpec covariance() { return {LossKind::Covariance}; }

  /// Parse a CLI name such as "mspe" or "huber".
  static LossSpec from_name(const std::string& name, double delta = 1.345,
                            double alpha = 1.0, double beta = 1.0);
  std::string name() const;
};

/// l(y,m). MSPE 0.5(y-m)^2; MAD |y-m|; Huber with the continuous
/// completion delta|e|-0.5 delta^2 beyond the switch point; ASMSPE
/// alpha e^2 / beta e^2; LogCosh log cosh(e); CrossEntropy
/// -y m + log(1+exp(m)) (overflow safe, y in {0,1}); Covariance 2 y m.
double loss_value(const LossSpec& spec, double y, double m);

/// psi(eps) evaluated from the full (y,m) pair. For the residual losses
/// eps = y - m; CrossEntropy uses y - logistic(m); Covariance returns y.
double score(const LossSpec& spec, double y, double m);

/// psi applied directly to a precomputed residual. For CrossEntropy the
/// residual is y - logistic(m) and for Covariance it is y itself, so psi
/// is the identity for those kinds.
double score_from_residual(const LossSpec& spec, double eps);

/// Constant c with d l/dm = c * psi(eps) wherever the loss is
/// differentiable. The catalog stores psi in the sign convention of the
/// usual loss tables, which differs from the m-gradient by this factor
/// (MSPE/Huber/LogCosh/CrossEntropy: -1; ASMSPE: -2; MAD: +2;
/// Covariance: +2).
double score_to_gradient_factor(LossKind kind);

/// Numeric check of the zero-mean-score condition on a fitted model's
/// out-of-sample residuals: the sample mean of psi(eps_t) * xdot_t, its
/// Euclidean norm, and a studentized magnitude compared against a
/// threshold (default 3).
struct ScoreDiagnostic {
  double mean_score_norm = 0.0;
  double studentized = 0.0;
  int n = 0;
  bool small_sample = false;  // fewer than 30 observations
  bool violation = false;     // studentized magnitude above the threshold
};

ScoreDiagnostic zero_mean_score_diagnostic(const LossSpec& spec,
                                           const Eigen::VectorXd& residuals,
                                           const Eigen::MatrixXd& score_weights,
                                           double threshold = 3.0);

}  // namespace oosinfer
