#include "oosinfer/learners.hpp"

#include <cmath>
#include <stdexcept>

#include "oosinfer/dnn.hpp"
#include "oosinfer/errors.hpp"

namespace oosinfer {

std::string to_string(LearnerKind k) {
  switch (k) {
    case LearnerKind::Ols: return "ols";
    case LearnerKind::Ridge: return "ridge";
    case LearnerKind::Lasso: return "lasso";
    case LearnerKind::Dnn: return "dnn";
  }
  return "?";
}

double FittedModel::predict(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (kind == LearnerKind::Dnn) {
    return dnn_predict(*arch, theta, x);
  }
  if (x.size() != theta.size()) {
    throw std::domain_error("predict: feature dimension " + std::to_string(x.size()) +
                            " does not match parameter dimension " + std::to_string(theta.size()));
  }
  return theta.dot(x);
}

Eigen::VectorXd FittedModel::predict_all(const Eigen::Ref<const Eigen::MatrixXd>& X) const {
  if (kind == LearnerKind::Dnn) {
    Eigen::VectorXd out(X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      out(i) = dnn_predict(*arch, theta, X.row(i).transpose());
    }
    return out;
  }
  if (X.cols() != theta.size()) {
    throw std::domain_error("predict: feature dimension mismatch");
  }
  return X * theta;
}

namespace {

// Penalty pattern: ones except the intercept column.
Eigen::VectorXd penalty_diag(const DesignMatrix& design) {
  Eigen::VectorXd d = Eigen::VectorXd::Ones(design.cols());
  if (design.has_intercept) d(0) = 0.0;
  return d;
}

Eigen::MatrixXd gram_of(const Eigen::Ref<const Eigen::MatrixXd>& X) {
  const Eigen::Index p = X.cols();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(p, p);
  g.selfadjointView<Eigen::Lower>().rankUpdate(X.transpose());
  g /= static_cast<double>(X.rows());
  return g.selfadjointView<Eigen::Lower>();
}

Eigen::VectorXd ridge_solve(const Eigen::MatrixXd& gram, const Eigen::VectorXd& xty,
                            const Eigen::VectorXd& pen, double lambda) {
  Eigen::MatrixXd a = gram;
  a.diagonal() += lambda * pen;
  return Eigen::LDLT<Eigen::MatrixXd>(a).solve(xty);
}

}  // namespace

FittedModel fit_ols(const DesignMatrix& design, const SplitPlan& split) {
  const Eigen::Index n = train_row_count(design, split);
  const Eigen::Index p = design.cols();
  if (n <= p) {
    throw SingularDesignError("OLS needs more training rows (" + std::to_string(n) +
                              ") than regressors (" + std::to_string(p) +
                              "); use ridge for the high-dimensional regime");
  }
  const auto X = design.X.topRows(n);
  const auto y = design.y.head(n);
  const Eigen::MatrixXd gram = gram_of(X);
  const Eigen::VectorXd xty = X.transpose() * y / static_cast<double>(n);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > 1e12) {
    throw SingularDesignError("training Gram matrix is numerically singular (condition " +
                              std::to_string(lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity()) +
                              "); use ridge instead");
  }

  FittedModel m;
  m.kind = LearnerKind::Ols;
  m.theta = Eigen::LDLT<Eigen::MatrixXd>(gram).solve(xty);
  m.lambda_used = 0.0;
  m.diagnostics.iterations = 1;
  m.diagnostics.converged = true;
  m.diagnostics.final_objective = (y - X * m.theta).squaredNorm() / static_cast<double>(n);
  m.diagnostics.objective_trace = {m.diagnostics.final_objective};
  return m;
}

std::vector<double> BlockedCvConfig::default_lambda_grid() {
  std::vector<double> grid;
  const int n = 20;
  const double lo = std::log(1e-4), hi = std::log(1e2);
  for (int i = 0; i < n; ++i) {
    grid.push_back(std::exp(lo + (hi - lo) * static_cast<double>(i) / (n - 1)));
  }
  return grid;
}

FittedModel fit_ridge(const DesignMatrix& design, const SplitPlan& split, double lambda) {
  if (lambda < 0.0) throw std::domain_error("ridge lambda must be non-negative");
  const Eigen::Index n = train_row_count(design, split);
  const auto X = design.X.topRows(n);
  const auto y = design.y.head(n);
  const Eigen::MatrixXd gram = gram_of(X);
  const Eigen::VectorXd xty = X.transpose() * y / static_cast<double>(n);

  FittedModel m;
  m.kind = LearnerKind::Ridge;
  m.theta = ridge_solve(gram, xty, penalty_diag(design), lambda);
  m.lambda_used = lambda;
  m.diagnostics.iterations = 1;
  m.diagnostics.converged = true;
  const Eigen::VectorXd pen = penalty_diag(design);
  m.diagnostics.final_objective = (y - X * m.theta).squaredNorm() / static_cast<double>(n) +
                                  lambda * (pen.array() * m.theta.array().square()).sum();
  m.diagnostics.objective_trace = {m.diagnostics.final_objective};
  return m;
}

FittedModel fit_ridge_cv(const DesignMatrix& design, const SplitPlan& split,
                         const BlockedCvConfig& cv) {
  if (cv.k < 1) throw ConfigError("cv.k must be >= 1");
  if (!(cv.train_fraction > 0.0 && cv.train_fraction < 1.0)) {
    throw ConfigError("cv train_fraction must lie in (0,1)");
  }
  if (cv.lambda_grid.empty()) throw ConfigError("cv lambda grid is empty");

  const Eigen::Index n = train_row_count(design, split);
  const Eigen::VectorXd pen = penalty_diag(design);
  const Eigen::Index n_lambda = static_cast<Eigen::Index>(cv.lambda_grid.size());
  Eigen::VectorXd cv_mspe = Eigen::VectorXd::Zero(n_lambda);

  const Eigen::Index block_len = n / cv.k;
  if (block_len < 4) {
    throw ConfigError("training sample too short for " + std::to_string(cv.k) + " CV blocks");
  }
  for (int b = 0; b < cv.k; ++b) {
    const Eigen::Index start = b * block_len;
    const Eigen::Index len = (b == cv.k - 1) ? n - start : block_len;
    const Eigen::Index sub_train = static_cast<Eigen::Index>(
        std::floor(static_cast<double>(len) * cv.train_fraction));
    const Eigen::Index sub_test = len - sub_train;
    if (sub_train < 1 || sub_test < 1) {
      throw ConfigError("CV block too short for the train fraction");
    }
    const auto Xb = design.X.middleRows(start, sub_train);
    const auto yb = design.y.segment(start, sub_train);
    const auto Xv = design.X.middleRows(start + sub_train, sub_test);
    const auto yv = design.y.segment(start + sub_train, sub_test);

    const Eigen::MatrixXd gram = gram_of(Xb);
    const Eigen::VectorXd xty = Xb.transpose() * yb / static_cast<double>(sub_train);
    for (Eigen::Index i = 0; i < n_lambda; ++i) {
      const Eigen::VectorXd theta = ridge_solve(gram, xty, pen, cv.lambda_grid[i]);
      cv_mspe(i) += (yv - Xv * theta).squaredNorm() / static_cast<double>(sub_test);
    }
  }

  Eigen::Index best = 0;
  cv_mspe.minCoeff(&best);
  FittedModel m = fit_ridge(design, split, cv.lambda_grid[best]);
  m.diagnostics.iterations = static_cast<int>(n_lambda) * cv.k;
  return m;
}

namespace {

double soft_threshold(double z, double gamma) {
  if (z > gamma) return z - gamma;
  if (z < -gamma) return z + gamma;
  return 0.0;
}

double lasso_objective(const Eigen::Ref<const Eigen::VectorXd>& residual,
                       const Eigen::VectorXd& theta, const Eigen::VectorXd& pen, double lambda,
                       double n) {
  return residual.squaredNorm() / n + lambda * (pen.array() * theta.array().abs()).sum();
}

}  // namespace

FittedModel fit_lasso(const DesignMatrix& design, const SplitPlan& split, double lambda,
                      const LassoOptions& options) {
  if (lambda < 0.0) throw std::domain_error("lasso lambda must be non-negative");
  const Eigen::Index n_rows = train_row_count(design, split);
  const Eigen::Index p = design.cols();
  if (p == 0) throw ConfigError("lasso on an empty design");
  const auto X = design.X.topRows(n_rows);
  const auto y = design.y.head(n_rows);
  const double n = static_cast<double>(n_rows);
  const Eigen::VectorXd pen = penalty_diag(design);

  Eigen::VectorXd col_ms(p);  // (1/n) sum x_j^2
  for (Eigen::Index j = 0; j < p; ++j) col_ms(j) = X.col(j).squaredNorm() / n;

  Eigen::VectorXd theta = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd r = y;

  FittedModel m;
  m.kind = LearnerKind::Lasso;
  m.lambda_used = lambda;

  auto sweep = [&](const std::vector<Eigen::Index>& coords) {
    double max_delta = 0.0;
    for (Eigen::Index j : coords) {
      if (col_ms(j) == 0.0) continue;
      const double z = X.col(j).dot(r) / n + col_ms(j) * theta(j);
      const double updated = pen(j) > 0.0 ? soft_threshold(z, lambda / 2.0) / col_ms(j)
                                          : z / col_ms(j);
      const double delta = updated - theta(j);
      if (delta != 0.0) {
        r.noalias() -= delta * X.col(j);
        theta(j) = updated;
        max_delta = std::max(max_delta, std::abs(delta));
      }
    }
    return max_delta;
  };

  std::vector<Eigen::Index> all(p);
  for (Eigen::Index j = 0; j < p; ++j) all[j] = j;

  int sweeps = 0;
  bool converged = false;
  while (sweeps < options.max_sweeps) {
    // Exact residual at every full pass keeps the running update honest.
    if (sweeps > 0) r.noalias() = y - X * theta;
    const double full_delta = sweep(all);
    ++sweeps;
    m.diagnostics.objective_trace.push_back(lasso_objective(r, theta, pen, lambda, n));
    if (full_delta < options.tol) {
      converged = true;
      break;
    }
    std::vector<Eigen::Index> active;
    for (Eigen::Index j = 0; j < p; ++j) {
      if (theta(j) != 0.0) active.push_back(j);
    }
    while (sweeps < options.max_sweeps) {
      const double d = sweep(active);
      ++sweeps;
      m.diagnostics.objective_trace.push_back(lasso_objective(r, theta, pen, lambda, n));
      if (d < options.tol) break;
    }
  }

  r = y - X * theta;
  m.theta = theta;
  m.diagnostics.iterations = sweeps;
  m.diagnostics.converged = converged;
  m.diagnostics.final_objective = lasso_objective(r, theta, pen, lambda, n);
  if (!converged) {
    m.diagnostics.warnings.push_back("lasso did not converge within " +
                                     std::to_string(options.max_sweeps) + " sweeps");
  }

  // Stationarity residual at exit: gradient of the smooth part is -2 X'r/n.
  double kkt = 0.0;
  const Eigen::VectorXd g = X.transpose() * r * (2.0 / n);
  for (Eigen::Index j = 0; j < p; ++j) {
    if (pen(j) == 0.0) {
      kkt = std::max(kkt, std::abs(g(j)));
    } else if (theta(j) != 0.0) {
      kkt = std::max(kkt, std::abs(-g(j) + lambda * (theta(j) > 0.0 ? 1.0 : -1.0)));
    } else {
      kkt = std::max(kkt, std::max(0.0, std::abs(g(j)) - lambda));
    }
  }
  m.diagnostics.kkt_max_violation = kkt;
  return m;
}

FittedModel fit_lasso(const DesignMatrix& design, const SplitPlan& split, LambdaRule rule,
                      const LassoOptions& options) {
  const Eigen::Index n = train_row_count(design, split);
  const double lambda = rule.scale * std::sqrt(std::log(static_cast<double>(design.cols())) /
                                               static_cast<double>(n));
  return fit_lasso(design, split, lambda, options);
}

double clipped_norm(const Eigen::VectorXd& theta, double tau) {
  if (!(tau > 0.0)) throw std::domain_error("clipped norm needs tau > 0");
  double s = 0.0;
  for (Eigen::Index j = 0; j < theta.size(); ++j) {
    s += std::min(std::abs(theta(j)) / tau, 1.0);
  }
  return s;
}

double fast_rate_diagnostic(const FittedModel& model, const TruthPredictor& truth,
                            const Eigen::Ref<const Eigen::MatrixXd>& X_test) {
  const Eigen::Index P = X_test.rows();
  if (P == 0) throw std::domain_error("fast_rate_diagnostic: empty test design");
  double s = 0.0;
  for (Eigen::Index i = 0; i < P; ++i) {
    const Eigen::VectorXd x = X_test.row(i).transpose();
    const double d = model.predict(x) - truth(x);
    s += d * d;
  }
  return std::sqrt(static_cast<double>(P)) * s / static_cast<double>(P);
}

double lasso_kkt_violation(const DesignMatrix& design, const SplitPlan& split,
                           const FittedModel& model, double lambda) {
  const Eigen::Index n_rows = train_row_count(design, split);
  const auto X = design.X.topRows(n_rows);
  const auto y = design.y.head(n_rows);
  const Eigen::VectorXd r = y - X * model.theta;
  const Eigen::VectorXd g = X.transpose() * r * (2.0 / static_cast<double>(n_rows));
  const Eigen::VectorXd pen = penalty_diag(design);
  double kkt = 0.0;
  for (Eigen::Index j = 0; j < design.cols(); ++j) {
    if (pen(j) == 0.0) {
      kkt = std::max(kkt, std::abs(g(j)));
    } else if (model.theta(j) != 0.0) {
      kkt = std::max(kkt, std::abs(-g(j) + lambda * (model.theta(j) > 0.0 ? 1.0 : -1.0)));
    } else {
      kkt = std::max(kkt, std::max(0.0, std::abs(g(j)) - lambda));
    }
  }
  return kkt;
}

}  // namespace oosinfer
