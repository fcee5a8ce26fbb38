#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "oosinfer/dgp.hpp"
#include "oosinfer/mdh.hpp"

namespace oosinfer {

struct McConfig {
  int n_reps = 500;
  std::vector<double> pi_grid = {1.0, 0.25};
  std::vector<double> alpha_grid = {0.1, 0.05, 0.01};
  std::uint64_t master_seed = 1;
  int parallel_width = 0;  // 0 = all hardware threads

  void validate() const;
};

/// Worker count actually used: min(requested or hardware, hardware,
/// OOS_INFER_THREADS when set).
int effective_workers(int requested);

/// Run fn(0..n_tasks-1) on a small pool. Tasks must not throw; results are
/// written into preallocated slots so the outcome does not depend on the
/// worker count.
void parallel_for(int n_tasks, int workers, const std::function<void(int)>& fn);

// ---------------------------------------------------------------------
// Coverage study (linear DGPs, Lasso at lambda = sqrt(log p / R))
// ---------------------------------------------------------------------

struct CoverageRepRecord {
  int rep = 0;
  int T = 0;
  double pi = 0.0;
  std::string dgp;
  double delta = 0.0;
  double er = 0.0;
  double risk = 0.0;   // empirical out-of-sample risk
  double omega = 0.0;  // long-run variance of the loss sequence
  double ci_lo = 0.0;  // at the primary (first) alpha of the grid
  double ci_hi = 0.0;
  bool covered = false;  // at the primary alpha
  bool converged = true;
  bool failed = false;
  std::string error;
};

struct CoverageCell {
  std::string dgp;
  int T = 0;
  double pi = 0.0;
  double alpha = 0.0;
  double coverage = 0.0;
  int n_ok = 0;
  int n_errors = 0;
};

struct CoverageStudyResult {
  std::vector<CoverageRepRecord> samples;
  std::vector<CoverageCell> cells;
  std::vector<int> Ts;
  std::vector<double> pis;
  std::vector<double> alphas;
  int error_count = 0;
  int nonconverged_count = 0;

  std::string samples_csv() const;
  std::string table_csv() const;

  /// Mean of delta / er over the successful replications of one cell.
  double mean_er(DgpKind dgp, int T, double pi) const;
  double mean_delta(DgpKind dgp, int T, double pi) const;
  double coverage_at(DgpKind dgp, int T, double pi, double alpha) const;
};

CoverageStudyResult run_coverage_study(const McConfig& config, const std::vector<DgpKind>& dgps,
                                       const std::vector<int>& Ts);

// ---------------------------------------------------------------------
// Size/power study for the MDH tests
// ---------------------------------------------------------------------

enum class MdhMethod { Ols, Ridge, Ap };
std::string to_string(MdhMethod m);

struct PowerCell {
  std::string dgp;
  std::string method;
  int T = 0;
  double pi = 0.0;
  double alpha = 0.0;
  double rejection_rate = 0.0;
  int n_ok = 0;
  int n_errors = 0;
};

struct PowerStudyResult {
  std::vector<PowerCell> cells;
  std::vector<int> Ts;
  std::vector<double> pis;
  std::vector<double> alphas;
  int error_count = 0;

  std::string table_csv() const;
  double rejection_rate(DgpKind dgp, MdhMethod method, int T, double pi, double alpha) const;

  /// Replication statistics of the self-normalized t under one setting
  /// (empty unless the method is a prediction-based test).
  std::vector<double> t_stats(DgpKind dgp, MdhMethod method, int T, double pi) const;

  // retained raw statistics per (dgp, T, pi, method, rep)
  struct RawStat {
    std::string dgp;
    std::string method;
    int T = 0;
    double pi = 0.0;
    int rep = 0;
    double statistic = 0.0;
    double p_value = 1.0;
    bool failed = false;
  };
  std::vector<RawStat> raw;
};

PowerStudyResult run_power_study(const McConfig& config, const std::vector<DgpKind>& dgps,
                                 const std::vector<MdhMethod>& methods,
                                 const std::vector<int>& Ts,
                                 const MdhOptions& options = {});

}  // namespace oosinfer
