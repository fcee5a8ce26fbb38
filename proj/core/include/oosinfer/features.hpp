#pragma once

#include <Eigen/Dense>
#include <set>
#include <string>
#include <vector>

#include "oosinfer/series.hpp"

namespace oosinfer {

/// Regressor matrix with aligned targets. Row t pairs the target Y_t with
/// features built from observations dated strictly before t, so the
/// predictor rows are measurable with respect to the past.
struct DesignMatrix {
  Eigen::MatrixXd X;        // T_eff x p
  Eigen::VectorXd y;        // T_eff
  std::vector<std::string> column_names;
  bool has_intercept = false;
  int max_lag = 0;          // rows dropped at the start of the series

  Eigen::Index rows() const { return X.rows(); }
  Eigen::Index cols() const { return X.cols(); }
};

struct FeatureConfig {
  int lags = 30;
  bool interactions = true;
  std::set<int> power_degrees = {2, 3, 4};
  bool standardize = false;  // train-set mean/sd applied to both splits
};

/// Number of columns produced by build_features:
/// 1 + L + C(L,2)*[interactions] + |powers|*L.
int feature_column_count(int lags, bool interactions, const std::set<int>& power_degrees);

/// Lag/interaction/power design from a univariate series. Columns are
/// intercept, lag1..lagL, lagi*lagj (i<j), then lag1^d..lagL^d per degree.
DesignMatrix build_features(const Series& series, int lags, bool interactions,
                            const std::set<int>& power_degrees);

/// Rows of the design that belong to the in-sample period (targets with
/// 1-based time index <= R). Requires R > max_lag.
Eigen::Index train_row_count(const DesignMatrix& design, const SplitPlan& split);

/// Copy with every non-intercept column shifted/scaled by the mean and
/// standard deviation of its first n_train rows. Constant columns are left
/// unscaled.
DesignMatrix standardized(const DesignMatrix& design, Eigen::Index n_train);

}  // namespace oosinfer
