#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>

#include "oosinfer/features.hpp"
#include "oosinfer/learners.hpp"
#include "oosinfer/series.hpp"

namespace oosinfer {

enum class DgpKind {
  SparseLinear,      // p = T, s = ceil(sqrt(p) - 27), alternating +-1
  Multicollinear,    // near-duplicated regressors, s = 15
  FastRatesLinear,   // p = T, s fixed at 5
  Garch11,
  Ar1Garch,
  Exp1,
  Nlma,
  Ar4Exp1,
  BinaryLogistic,    // bounded AR states, logistic binary outcome
};

DgpKind dgp_kind_from_name(const std::string& name);
std::string to_string(DgpKind kind);
int dgp_numeric_id(DgpKind kind);  // stable id used in substream seeding

struct DgpSpec {
  DgpKind kind = DgpKind::FastRatesLinear;
  int T = 1000;
  std::uint64_t seed = 0;

  // linear designs
  int fast_rates_sparsity = 5;
  int multicollinear_sparsity = 15;
  double collinear_noise_sd = 0.1;

  // recursions
  double garch_omega = 0.1;
  double garch_alpha = 0.2;
  double garch_beta = 0.7;
  double ar1_phi = 0.3;
  double exp1_coef = 0.6;
  double exp1_decay = 0.5;
  int burn_in = 500;

  // binary outcome design
  int logistic_dim = 3;
  double logistic_ar = 0.5;
  double logistic_noise_sd = 0.5;

  void validate() const;
};

/// ceil(sqrt(p) - 27), the decreasing-sparsity rule with p = T.
int sparse_linear_sparsity(int p);

/// One simulated draw: time-series kinds fill `series`; regression kinds
/// fill `design` (T rows; the split maps the first R to estimation) along
/// with the true parameter, the analytic risk at the truth, and the true
/// predictor map.
struct SimDraw {
  std::optional<Series> series;
  std::optional<DesignMatrix> design;
  Eigen::VectorXd theta0;
  double true_risk = std::numeric_limits<double>::quiet_NaN();
  TruthPredictor truth;
};

SimDraw generate(const DgpSpec& spec);

}  // namespace oosinfer
