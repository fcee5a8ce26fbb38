#include "oosinfer/oos.hpp"

#include <cmath>
#include <stdexcept>

#include "oosinfer/stats.hpp"

namespace oosinfer {

namespace {

Eigen::VectorXd losses_on(const FittedModel& model, const LossSpec& loss,
                          const Eigen::Ref<const Eigen::MatrixXd>& X,
                          const Eigen::Ref<const Eigen::VectorXd>& y) {
  if (X.rows() == 0) throw std::domain_error("empty test set");
  const Eigen::VectorXd m = model.predict_all(X);
  Eigen::VectorXd f(X.rows());
  for (Eigen::Index t = 0; t < X.rows(); ++t) f(t) = loss_value(loss, y(t), m(t));
  return f;
}

}  // namespace

Eigen::VectorXd oos_losses(const FittedModel& model, const LossSpec& loss,
                           const DesignMatrix& test_design) {
  return losses_on(model, loss, test_design.X, test_design.y);
}

Eigen::VectorXd oos_losses(const FittedModel& model, const LossSpec& loss,
                           const DesignMatrix& design, const SplitPlan& split) {
  const Eigen::Index n_train = train_row_count(design, split);
  const Eigen::Index n_test = design.rows() - n_train;
  return losses_on(model, loss, design.X.bottomRows(n_test), design.y.tail(n_test));
}

LrvEstimate long_run_variance(const Eigen::VectorXd& losses, int bandwidth) {
  const Eigen::Index n = losses.size();
  if (n < 2) throw std::domain_error("long_run_variance needs at least 2 observations");

  const Eigen::VectorXd a = losses.array() - losses.mean();
  const double dn = static_cast<double>(n);
  const double gamma0 = a.squaredNorm() / dn;

  LrvEstimate out;
  if (gamma0 == 0.0) {
    out.omega = 0.0;
    out.bandwidth = 0;
    out.degenerate = true;
    return out;
  }

  int L = bandwidth;
  if (L == kAutoBandwidth) {
    L = static_cast<int>(std::floor(4.0 * std::pow(dn / 100.0, 2.0 / 9.0)));
  }
  if (L < 0) throw std::domain_error("bandwidth must be non-negative");
  L = std::min<int>(L, static_cast<int>(n) - 1);

  double omega = gamma0;
  for (int j = 1; j <= L; ++j) {
    const double gj = a.tail(n - j).dot(a.head(n - j)) / dn;
    const double w = 1.0 - static_cast<double>(j) / (static_cast<double>(L) + 1.0);
    omega += 2.0 * w * gj;
  }
  out.omega = std::max(omega, gamma0 * 1e-12);
  out.bandwidth = L;
  out.degenerate = false;
  return out;
}

ConfidenceInterval confidence_interval(double empirical_risk, double omega_hat, int n_oos,
                                       double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("alpha must lie in (0,1)");
  if (n_oos < 1) throw std::domain_error("confidence_interval needs n_oos >= 1");
  if (omega_hat < 0.0) throw std::domain_error("omega_hat must be non-negative");
  const double z = normal_quantile(1.0 - alpha / 2.0);
  const double half = z * std::sqrt(omega_hat / static_cast<double>(n_oos));
  ConfidenceInterval ci;
  ci.lo = empirical_risk - half;
  ci.hi = empirical_risk + half;
  ci.degenerate = half == 0.0;
  return ci;
}

OosRiskReport delta_and_er(const FittedModel& model, const LossSpec& loss,
                           const DesignMatrix& design, const SplitPlan& split,
                           const Eigen::VectorXd& true_theta, double true_risk, double alpha,
                           int bandwidth) {
  if (true_theta.size() != design.cols()) {
    throw std::domain_error("true_theta has dimension " + std::to_string(true_theta.size()) +
                            ", design has " + std::to_string(design.cols()) + " columns");
  }
  const Eigen::Index n_train = train_row_count(design, split);
  const Eigen::Index P = design.rows() - n_train;
  const auto Xte = design.X.bottomRows(P);
  const auto yte = design.y.tail(P);

  const Eigen::VectorXd f_hat = losses_on(model, loss, Xte, yte);

  FittedModel oracle;
  oracle.kind = LearnerKind::Ols;
  oracle.theta = true_theta;
  const Eigen::VectorXd f_0 = losses_on(oracle, loss, Xte, yte);

  OosRiskReport r;
  r.n_oos = static_cast<int>(P);
  r.empirical_risk = f_hat.mean();
  r.true_risk = true_risk;
  r.truth_known = true;
  const double sp = std::sqrt(static_cast<double>(P));
  r.delta = sp * (r.empirical_risk - true_risk);
  r.er = sp * (f_hat.mean() - f_0.mean());
  const LrvEstimate lrv = long_run_variance(f_hat, bandwidth);
  r.omega_hat = lrv.omega;
  r.degenerate_variance = lrv.degenerate;
  r.alpha = alpha;
  const ConfidenceInterval ci = confidence_interval(r.empirical_risk, r.omega_hat, r.n_oos, alpha);
  r.ci_lo = ci.lo;
  r.ci_hi = ci.hi;
  r.degenerate_variance = r.degenerate_variance || ci.degenerate;
  r.covered = true_risk >= ci.lo && true_risk <= ci.hi;
  return r;
}

}  // namespace oosinfer
