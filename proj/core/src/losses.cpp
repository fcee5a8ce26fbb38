#include "oosinfer/losses.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "oosinfer/errors.hpp"

namespace oosinfer {

LossSpec LossSpec::huber(double delta) {
  if (!(delta > 0.0)) throw std::domain_error("Huber delta must be positive");
  LossSpec s;
  s.kind = LossKind::Huber;
  s.delta = delta;
  return s;
}

LossSpec LossSpec::asmspe(double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0)) {
    throw std::domain_error("ASMSPE weights must be positive");
  }
  LossSpec s;
  s.kind = LossKind::ASMSPE;
  s.alpha = alpha;
  s.beta = beta;
  return s;
}

LossSpec LossSpec::from_name(const std::string& name, double delta, double alpha, double beta) {
  if (name == "mspe") return mspe();
  if (name == "mad") return mad();
  if (name == "huber") return huber(delta);
  if (name == "asmspe") return asmspe(alpha, beta);
  if (name == "logcosh" || name == "log-cosh") return logcosh();
  if (name == "cross-entropy" || name == "cross_entropy") return cross_entropy();
  if (name == "covariance") return covariance();
  throw ConfigError("unknown loss '" + name + "'");
}

std::string LossSpec::name() const {
  switch (kind) {
    case LossKind::MSPE: return "mspe";
    case LossKind::MAD: return "mad";
    case LossKind::Huber: return "huber";
    case LossKind::ASMSPE: return "asmspe";
    case LossKind::LogCosh: return "logcosh";
    case LossKind::CrossEntropy: return "cross-entropy";
    case LossKind::Covariance: return "covariance";
  }
  return "?";
}

namespace {

void check_binary(double y) {
  if (y != 0.0 && y != 1.0) {
    throw std::domain_error("cross-entropy needs y in {0,1}, got " + std::to_string(y));
  }
}

// log(1 + exp(m)) without overflow at large |m|.
double log1p_exp(double m) {
  if (m > 0.0) return m + std::log1p(std::exp(-m));
  return std::log1p(std::exp(m));
}

double logistic(double m) {
  if (m >= 0.0) return 1.0 / (1.0 + std::exp(-m));
  const double e = std::exp(m);
  return e / (1.0 + e);
}

// log(cosh(e)) = |e| - log 2 + log1p(exp(-2|e|))
double log_cosh(double e) {
  const double a = std::abs(e);
  return a - 0.6931471805599453 + std::log1p(std::exp(-2.0 * a));
}

}  // namespace

double loss_value(const LossSpec& spec, double y, double m) {
  const double e = y - m;
  switch (spec.kind) {
    case LossKind::MSPE:
      return 0.5 * e * e;
    case LossKind::MAD:
      return std::abs(e);
    case LossKind::Huber:
      if (std::abs(e) <= spec.delta) return 0.5 * e * e;
      return spec.delta * std::abs(e) - 0.5 * spec.delta * spec.delta;
    case LossKind::ASMSPE:
      return e >= 0.0 ? spec.alpha * e * e : spec.beta * e * e;
    case LossKind::LogCosh:
      return log_cosh(e);
    case LossKind::CrossEntropy:
      check_binary(y);
      return -y * m + log1p_exp(m);
    case LossKind::Covariance:
      return 2.0 * y * m;
  }
  throw std::logic_error("unreachable loss kind");
}

double score(const LossSpec& spec, double y, double m) {
  switch (spec.kind) {
    case LossKind::CrossEntropy:
      check_binary(y);
      return y - logistic(m);
    case LossKind::Covariance:
      return y;
    default:
      return score_from_residual(spec, y - m);
  }
}

double score_from_residual(const LossSpec& spec, double eps) {
  switch (spec.kind) {
    case LossKind::MSPE:
      return eps;
    case LossKind::MAD:
      return (eps <= 0.0 ? 1.0 : 0.0) - 0.5;
    case LossKind::Huber:
      if (std::abs(eps) <= spec.delta) return eps;
      return eps > 0.0 ? spec.delta : -spec.delta;
    case LossKind::ASMSPE:
      return eps >= 0.0 ? spec.alpha * eps : spec.beta * eps;
    case LossKind::LogCosh:
      return std::tanh(eps);
    case LossKind::CrossEntropy:
    case LossKind::Covariance:
      return eps;  // caller supplies y - logistic(m), resp. y
  }
  throw std::logic_error("unreachable loss kind");
}

double score_to_gradient_factor(LossKind kind) {
  switch (kind) {
    case LossKind::MSPE:
    case LossKind::Huber:
    case LossKind::LogCosh:
    case LossKind::CrossEntropy:
      return -1.0;
    case LossKind::ASMSPE:
      return -2.0;
    case LossKind::MAD:
    case LossKind::Covariance:
      return 2.0;
  }
  throw std::logic_error("unreachable loss kind");
}

ScoreDiagnostic zero_mean_score_diagnostic(const LossSpec& spec,
                                           const Eigen::VectorXd& residuals,
                                           const Eigen::MatrixXd& score_weights,
                                           double threshold) {
  const Eigen::Index n = residuals.size();
  if (n == 0) throw std::domain_error("zero_mean_score_diagnostic: empty sample");
  if (score_weights.rows() != n) {
    throw std::domain_error("zero_mean_score_diagnostic: residuals and weight rows misaligned");
  }

  const Eigen::Index k = score_weights.cols();
  Eigen::MatrixXd s(n, k);
  for (Eigen::Index t = 0; t < n; ++t) {
    s.row(t) = score_from_residual(spec, residuals(t)) * score_weights.row(t);
  }

  const Eigen::RowVectorXd mean_score = s.colwise().mean();
  ScoreDiagnostic out;
  out.n = static_cast<int>(n);
  out.small_sample = n < 30;
  out.mean_score_norm = mean_score.norm();

  const double dispersion =
      std::sqrt((s.rowwise() - mean_score).rowwise().squaredNorm().sum() /
                static_cast<double>(n));
  if (dispersion > 0.0) {
    out.studentized = std::sqrt(static_cast<double>(n)) * out.mean_score_norm / dispersion;
  } else {
    out.studentized = out.mean_score_norm > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  }
  out.violation = out.studentized > threshold;
  return out;
}

}  // namespace oosinfer
