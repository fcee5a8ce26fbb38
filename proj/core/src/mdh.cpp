#include "oosinfer/mdh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "oosinfer/errors.hpp"
#include "oosinfer/stats.hpp"

namespace oosinfer {

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hash_hex(const std::string& s) {
  std::ostringstream os;
  os << std::hex << fnv1a(s);
  return os.str();
}

std::string canonical_config(const SplitPlan& split, MdhLearner learner,
                             const MdhOptions& options, int feature_dim) {
  std::ostringstream os;
  os << "mdh;R=" << split.R << ";P=" << split.P
     << ";learner=" << (learner == MdhLearner::Ols ? "ols" : "ridge")
     << ";lags=" << options.features.lags << ";inter=" << options.features.interactions
     << ";npow=" << options.features.power_degrees.size() << ";ols_lags=" << options.ols_lags
     << ";std=" << options.features.standardize << ";cvk=" << options.cv.k
     << ";alpha=" << options.alpha << ";p=" << feature_dim;
  return os.str();
}

}  // namespace

double self_normalized_t(const Eigen::VectorXd& g) {
  const double P = static_cast<double>(g.size());
  const double mean = g.mean();
  const double mean_sq = g.squaredNorm() / P;
  if (mean_sq <= 0.0) {
    throw DegenerateEstimatorError("self-normalizer is zero; all products vanish");
  }
  return std::sqrt(P) * mean / std::sqrt(mean_sq);
}

MdhTestReport mdh_test_on_design(const DesignMatrix& design, const SplitPlan& split,
                                 MdhLearner learner, const MdhOptions& options) {
  if (split.P < 30) {
    throw InvalidSplitError("MDH test needs at least 30 evaluation observations, got " +
                            std::to_string(split.P));
  }
  // Lag powers of fat-tailed series sit on wildly different scales; the
  // penalized fit runs on train-standardized columns. OLS predictions are
  // equivariant under column scaling, so only the ridge path rescales.
  DesignMatrix scaled;
  const DesignMatrix* used = &design;
  if (learner == MdhLearner::RidgeCv && options.features.standardize) {
    scaled = standardized(design, train_row_count(design, split));
    used = &scaled;
  }
  FittedModel model;
  switch (learner) {
    case MdhLearner::Ols:
      model = fit_ols(*used, split);
      break;
    case MdhLearner::RidgeCv:
      model = fit_ridge_cv(*used, split, options.cv);
      break;
  }
  if (model.theta.lpNorm<Eigen::Infinity>() < options.degenerate_tol) {
    throw DegenerateEstimatorError(
        "fitted coefficients are numerically zero; the self-normalized statistic is undefined "
        "(a ridge fit keeps the estimator off zero)");
  }

  const Eigen::Index n_train = train_row_count(*used, split);
  const Eigen::Index P = used->rows() - n_train;
  const Eigen::VectorXd pred = model.predict_all(used->X.bottomRows(P));
  const Eigen::VectorXd g = used->y.tail(P).cwiseProduct(pred);

  MdhTestReport r;
  r.method = learner == MdhLearner::Ols ? "ols" : "ridge";
  r.statistic = self_normalized_t(g);
  r.p_value = std::clamp(1.0 - normal_cdf(r.statistic), 1e-300, 1.0 - 1e-16);
  r.n_oos = static_cast<int>(P);
  r.feature_dim = static_cast<int>(design.cols());
  r.alpha = options.alpha;
  r.reject = r.statistic > normal_quantile(1.0 - options.alpha);
  r.seed = options.seed;
  r.config_hash = hash_hex(canonical_config(split, learner, options, r.feature_dim));
  return r;
}

MdhTestReport mdh_test(const Series& series, const SplitPlan& split, MdhLearner learner,
                       const MdhOptions& options) {
  DesignMatrix design;
  if (learner == MdhLearner::Ols) {
    design = build_features(series, options.ols_lags, false, {});
  } else {
    design = build_features(series, options.features.lags, options.features.interactions,
                            options.features.power_degrees);
  }
  return mdh_test_on_design(design, split, learner, options);
}

MdhTestReport auto_portmanteau(std::span<const double> segment, const ApOptions& options) {
  const int n = static_cast<int>(segment.size());
  if (n < 50) {
    throw InsufficientDataError("automatic portmanteau needs a segment of at least 50, got " +
                                std::to_string(n));
  }
  const double dn = static_cast<double>(n);
  double mean = 0.0;
  for (double v : segment) mean += v;
  mean /= dn;

  double var = 0.0;
  for (double v : segment) var += (v - mean) * (v - mean);
  if (var == 0.0) {
    throw DegenerateEstimatorError("constant segment has no autocorrelation structure");
  }

  int d = options.max_lag;
  if (d <= 0) d = std::min(static_cast<int>(std::floor(10.0 * std::log10(dn))), 50);
  d = std::min(d, n - 2);

  // gamma_j and its heteroskedasticity-robust variance tau_j, both with
  // divisor n.
  std::vector<double> rho2(static_cast<std::size_t>(d) + 1, 0.0);
  double max_abs_rho = 0.0;
  for (int j = 1; j <= d; ++j) {
    double gj = 0.0, tj = 0.0;
    for (int t = j; t < n; ++t) {
      const double a = segment[static_cast<std::size_t>(t)] - mean;
      const double b = segment[static_cast<std::size_t>(t - j)] - mean;
      gj += a * b;
      tj += a * a * b * b;
    }
    gj /= dn;
    tj /= dn;
    if (tj <= 0.0) {
      throw DegenerateEstimatorError("degenerate robust variance at lag " + std::to_string(j));
    }
    rho2[static_cast<std::size_t>(j)] = gj * gj / tj;
    max_abs_rho = std::max(max_abs_rho, std::abs(gj) / std::sqrt(tj));
  }

  const bool small_correlations = std::sqrt(dn) * max_abs_rho <= std::sqrt(2.4 * std::log(dn));
  double best_value = -std::numeric_limits<double>::infinity();
  int best_lag = 1;
  double best_q = 0.0;
  double q = 0.0;
  for (int p = 1; p <= d; ++p) {
    q += dn * rho2[static_cast<std::size_t>(p)];
    const double penalty = small_correlations ? static_cast<double>(p) * std::log(dn)
                                              : 2.0 * static_cast<double>(p);
    if (q - penalty > best_value) {
      best_value = q - penalty;
      best_lag = p;
      best_q = q;
    }
  }

  MdhTestReport r;
  r.method = "ap";
  r.statistic = best_q;
  r.p_value = std::clamp(chi_squared1_upper_tail(best_q), 1e-300, 1.0);
  r.n_oos = n;
  r.selected_lag = best_lag;
  r.alpha = options.alpha;
  r.reject = r.p_value < options.alpha;
  r.config_hash = hash_hex("ap;n=" + std::to_string(n) + ";d=" + std::to_string(d) +
                           ";alpha=" + std::to_string(options.alpha));
  return r;
}

}  // namespace oosinfer
