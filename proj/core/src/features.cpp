#include "oosinfer/features.hpp"

#include <cmath>

#include "oosinfer/errors.hpp"

namespace oosinfer {

int feature_column_count(int lags, bool interactions, const std::set<int>& power_degrees) {
  const int L = lags;
  int n = 1 + L;
  if (interactions) n += L * (L - 1) / 2;
  n += static_cast<int>(power_degrees.size()) * L;
  return n;
}

DesignMatrix build_features(const Series& series, int lags, bool interactions,
                            const std::set<int>& power_degrees) {
  if (lags < 1) throw ConfigError("lags must be >= 1, got " + std::to_string(lags));
  for (int d : power_degrees) {
    if (d < 2 || d > 4) {
      throw ConfigError("power degrees must lie in {2,3,4}, got " + std::to_string(d));
    }
  }
  const int T = series.size();
  if (T < lags + 2) {
    throw InsufficientDataError("series of length " + std::to_string(T) +
                                " too short for " + std::to_string(lags) + " lags");
  }

  const int L = lags;
  const int p = feature_column_count(L, interactions, power_degrees);
  const int n = T - L;

  DesignMatrix d;
  d.X.resize(n, p);
  d.y.resize(n);
  d.has_intercept = true;
  d.max_lag = L;
  d.column_names.reserve(p);
  d.column_names.push_back("intercept");
  for (int i = 1; i <= L; ++i) d.column_names.push_back("lag" + std::to_string(i));
  if (interactions) {
    for (int i = 1; i <= L; ++i) {
      for (int j = i + 1; j <= L; ++j) {
        d.column_names.push_back("lag" + std::to_string(i) + "*lag" + std::to_string(j));
      }
    }
  }
  for (int deg : power_degrees) {
    for (int i = 1; i <= L; ++i) {
      d.column_names.push_back("lag" + std::to_string(i) + "^" + std::to_string(deg));
    }
  }

  const std::vector<double>& v = series.values();
  for (int r = 0; r < n; ++r) {
    const int t = r + L;  // 0-based target index; lags are v[t-1..t-L]
    d.y(r) = v[t];
    int c = 0;
    d.X(r, c++) = 1.0;
    for (int i = 1; i <= L; ++i) d.X(r, c++) = v[t - i];
    if (interactions) {
      for (int i = 1; i <= L; ++i) {
        for (int j = i + 1; j <= L; ++j) d.X(r, c++) = v[t - i] * v[t - j];
      }
    }
    for (int deg : power_degrees) {
      for (int i = 1; i <= L; ++i) d.X(r, c++) = std::pow(v[t - i], deg);
    }
  }
  return d;
}

Eigen::Index train_row_count(const DesignMatrix& design, const SplitPlan& split) {
  const Eigen::Index n_train = split.R - design.max_lag;
  if (n_train < 1) {
    throw InsufficientDataError("in-sample size R=" + std::to_string(split.R) +
                                " leaves no training rows after " +
                                std::to_string(design.max_lag) + " lags");
  }
  if (n_train >= design.rows()) {
    throw InvalidSplitError("split leaves no test rows in the design");
  }
  return n_train;
}

DesignMatrix standardized(const DesignMatrix& design, Eigen::Index n_train) {
  if (n_train < 2 || n_train > design.rows()) {
    throw ConfigError("standardized: n_train out of range");
  }
  DesignMatrix out = design;
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    if (out.has_intercept && j == 0) continue;
    const auto head = design.X.col(j).head(n_train);
    const double mu = head.mean();
    const double sd = std::sqrt((head.array() - mu).square().sum() /
                                static_cast<double>(n_train));
    if (sd <= 0.0) continue;
    out.X.col(j) = (design.X.col(j).array() - mu) / sd;
  }
  return out;
}

}  // namespace oosinfer
