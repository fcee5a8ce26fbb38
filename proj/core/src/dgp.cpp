#include "oosinfer/dgp.hpp"

#include <cmath>

#include "oosinfer/errors.hpp"
#include "oosinfer/rng.hpp"

namespace oosinfer {

DgpKind dgp_kind_from_name(const std::string& name) {
  if (name == "decreasing-sparsity" || name == "sparse-linear") return DgpKind::SparseLinear;
  if (name == "multicollinearity" || name == "multicollinear") return DgpKind::Multicollinear;
  if (name == "fast-rates") return DgpKind::FastRatesLinear;
  if (name == "garch11" || name == "garch") return DgpKind::Garch11;
  if (name == "ar1-garch") return DgpKind::Ar1Garch;
  if (name == "exp1") return DgpKind::Exp1;
  if (name == "nlma") return DgpKind::Nlma;
  if (name == "ar4-exp1") return DgpKind::Ar4Exp1;
  if (name == "binary-logistic") return DgpKind::BinaryLogistic;
  throw ConfigError("unknown dgp '" + name + "'");
}

std::string to_string(DgpKind kind) {
  switch (kind) {
    case DgpKind::SparseLinear: return "decreasing-sparsity";
    case DgpKind::Multicollinear: return "multicollinearity";
    case DgpKind::FastRatesLinear: return "fast-rates";
    case DgpKind::Garch11: return "garch11";
    case DgpKind::Ar1Garch: return "ar1-garch";
    case DgpKind::Exp1: return "exp1";
    case DgpKind::Nlma: return "nlma";
    case DgpKind::Ar4Exp1: return "ar4-exp1";
    case DgpKind::BinaryLogistic: return "binary-logistic";
  }
  return "?";
}

int dgp_numeric_id(DgpKind kind) { return static_cast<int>(kind) + 1; }

void DgpSpec::validate() const {
  if (T < 4) throw ConfigError("dgp sample size T too small");
  if (!(garch_omega > 0.0) || garch_alpha < 0.0 || garch_beta < 0.0 ||
      garch_alpha + garch_beta >= 1.0) {
    throw ConfigError("garch parameters must satisfy omega > 0, alpha+beta < 1");
  }
  if (logistic_dim < 1) throw ConfigError("logistic dgp dimension must be >= 1");
  if (burn_in < 0) throw ConfigError("burn-in must be non-negative");
}

int sparse_linear_sparsity(int p) {
  return static_cast<int>(std::ceil(std::sqrt(static_cast<double>(p)) - 27.0));
}

namespace {

// theta0 with the first s entries alternating +1/-1, the rest zero.
Eigen::VectorXd alternating_theta(int p, int s) {
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(p);
  for (int j = 0; j < std::min(s, p); ++j) theta(j) = (j % 2 == 0) ? 1.0 : -1.0;
  return theta;
}

SimDraw linear_draw(const DgpSpec& spec, int s, bool collinear) {
  const int T = spec.T;
  const int p = T;
  if (s < 1) throw ConfigError("sparsity index must be >= 1, got " + std::to_string(s));
  Rng rng(spec.seed);

  DesignMatrix d;
  d.X.resize(T, p);
  d.y.resize(T);
  d.has_intercept = false;
  d.max_lag = 0;

  if (collinear) {
    for (int t = 0; t < T; ++t) d.X(t, 0) = rng.normal();
    for (int j = 1; j < p; ++j) {
      for (int t = 0; t < T; ++t) {
        d.X(t, j) = d.X(t, 0) + rng.normal(0.0, spec.collinear_noise_sd);
      }
    }
  } else {
    for (int j = 0; j < p; ++j) {
      for (int t = 0; t < T; ++t) d.X(t, j) = rng.normal();
    }
  }

  SimDraw out;
  out.theta0 = alternating_theta(p, s);
  for (int t = 0; t < T; ++t) {
    d.y(t) = d.X.row(t).head(s).dot(out.theta0.head(s)) + rng.normal();
  }
  out.true_risk = 1.0;  // errors are standard normal
  const Eigen::VectorXd theta0 = out.theta0;
  out.truth = [theta0](const Eigen::Ref<const Eigen::VectorXd>& x) { return theta0.dot(x); };
  out.design = std::move(d);
  return out;
}

Series recursive_series(const DgpSpec& spec) {
  const int n = spec.T + spec.burn_in;
  Rng rng(spec.seed);
  std::vector<double> y(static_cast<std::size_t>(n), 0.0);

  switch (spec.kind) {
    case DgpKind::Garch11: {
      double sigma2 = 0.0;
      double prev_shock = 0.0;
      for (int t = 0; t < n; ++t) {
        sigma2 = spec.garch_omega + spec.garch_alpha * prev_shock * prev_shock +
                 spec.garch_beta * sigma2;
        prev_shock = rng.normal() * std::sqrt(sigma2);
        y[static_cast<std::size_t>(t)] = prev_shock;
      }
      break;
    }
    case DgpKind::Ar1Garch: {
      double sigma2 = 0.0;
      double prev_shock = 0.0;
      double prev_y = 0.0;
      for (int t = 0; t < n; ++t) {
        sigma2 = spec.garch_omega + spec.garch_alpha * prev_shock * prev_shock +
                 spec.garch_beta * sigma2;
        prev_shock = rng.normal() * std::sqrt(sigma2);
        prev_y = spec.ar1_phi * prev_y + prev_shock;
        y[static_cast<std::size_t>(t)] = prev_y;
      }
      break;
    }
    case DgpKind::Exp1: {
      double prev = 0.0;
      for (int t = 0; t < n; ++t) {
        prev = spec.exp1_coef * prev * std::exp(-spec.exp1_decay * prev * prev) + rng.normal();
        y[static_cast<std::size_t>(t)] = prev;
      }
      break;
    }
    case DgpKind::Nlma: {
      double e1 = 0.0, e2 = 0.0;  // eps_{t-1}, eps_{t-2}
      for (int t = 0; t < n; ++t) {
        const double e0 = rng.normal();
        y[static_cast<std::size_t>(t)] = e1 * e2 * (1.0 + e0 + e2);
        e2 = e1;
        e1 = e0;
      }
      break;
    }
    case DgpKind::Ar4Exp1: {
      double y1 = 0.0, y2 = 0.0, y3 = 0.0, y4 = 0.0;
      for (int t = 0; t < n; ++t) {
        const double v = 10.0 * std::exp(-0.5 * y1 * y1) + 0.58 * y1 + 0.1 * y2 + 0.06 * y3 +
                         0.02 * y4 + rng.normal();
        y4 = y3;
        y3 = y2;
        y2 = y1;
        y1 = v;
        y[static_cast<std::size_t>(t)] = v;
      }
      break;
    }
    default:
      throw ConfigError("not a recursive series dgp");
  }

  std::vector<double> kept(y.begin() + spec.burn_in, y.end());
  return Series(std::move(kept), to_string(spec.kind));
}

SimDraw binary_logistic_draw(const DgpSpec& spec) {
  const int T = spec.T;
  const int dim = spec.logistic_dim;
  Rng rng(spec.seed);

  // Smooth conditional mean on the box: a fixed sum of sines.
  const auto m0 = [dim](const Eigen::Ref<const Eigen::VectorXd>& x) {
    double v = 0.0;
    for (int k = 0; k < dim; ++k) {
      v += 1.2 / static_cast<double>(k + 1) * std::sin(3.14159265358979323846 * x(k));
    }
    return v;
  };

  DesignMatrix d;
  d.X.resize(T, dim);
  d.y.resize(T);
  d.has_intercept = false;
  d.max_lag = 0;

  Eigen::VectorXd state = Eigen::VectorXd::Zero(dim);
  for (int b = 0; b < spec.burn_in; ++b) {
    for (int k = 0; k < dim; ++k) {
      state(k) = std::clamp(spec.logistic_ar * state(k) + rng.normal(0.0, spec.logistic_noise_sd),
                            -1.0, 1.0);
    }
  }
  for (int t = 0; t < T; ++t) {
    for (int k = 0; k < dim; ++k) {
      state(k) = std::clamp(spec.logistic_ar * state(k) + rng.normal(0.0, spec.logistic_noise_sd),
                            -1.0, 1.0);
    }
    d.X.row(t) = state.transpose();
    const double m = m0(state);
    const double prob = 1.0 / (1.0 + std::exp(-m));
    d.y(t) = rng.bernoulli(prob) ? 1.0 : 0.0;
  }

  SimDraw out;
  out.design = std::move(d);
  out.truth = m0;
  return out;
}

}  // namespace

SimDraw generate(const DgpSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case DgpKind::SparseLinear:
      return linear_draw(spec, sparse_linear_sparsity(spec.T), false);
    case DgpKind::FastRatesLinear:
      return linear_draw(spec, spec.fast_rates_sparsity, false);
    case DgpKind::Multicollinear:
      return linear_draw(spec, spec.multicollinear_sparsity, true);
    case DgpKind::Garch11:
    case DgpKind::Ar1Garch:
    case DgpKind::Exp1:
    case DgpKind::Nlma:
    case DgpKind::Ar4Exp1: {
      SimDraw out;
      out.series = recursive_series(spec);
      return out;
    }
    case DgpKind::BinaryLogistic:
      return binary_logistic_draw(spec);
  }
  throw ConfigError("unknown dgp kind");
}

}  // namespace oosinfer
