// Command line front end: Monte Carlo studies (coverage, power, er-hist)
// and file-based tests (mdh, diagnose-score).

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "oosinfer/dnn.hpp"
#include "oosinfer/errors.hpp"
#include "oosinfer/mdh.hpp"
#include "oosinfer/oos.hpp"
#include "oosinfer/series.hpp"
#include "oosinfer/stats.hpp"
#include "oosinfer/studies.hpp"
#include "run_output.hpp"

namespace {

using namespace oosinfer;
using oosinfer::cli::ordered_json;
using oosinfer::cli::RunOutput;

std::string fmt(double v, const char* spec = "%.10g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

// Flat key=value config file. '#' starts a comment; values may hold
// several whitespace-separated entries for list options.
std::vector<std::pair<std::string, std::string>> read_flat_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::vector<std::pair<std::string, std::string>> items;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto strip = [](std::string s) {
      const std::size_t b = s.find_first_not_of(" \t\r");
      const std::size_t e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    line = strip(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + " is not key=value: '" +
                        line + "'");
    }
    items.emplace_back(strip(line.substr(0, eq)), strip(line.substr(eq + 1)));
  }
  return items;
}

// Command-line flags take precedence; config fills in unset options only.
void apply_config(CLI::App* cmd, const std::string& path) {
  if (path.empty()) return;
  for (const auto& [key, value] : read_flat_config(path)) {
    if (key == "config") continue;
    CLI::Option* opt = cmd->get_option_no_throw("--" + key);
    if (opt == nullptr) {
      throw ConfigError("unknown config key '" + key + "'");
    }
    if (opt->count() > 0) continue;
    std::stringstream ss(value);
    std::string token;
    bool any = false;
    while (ss >> token) {
      opt->add_result(token);
      any = true;
    }
    if (!any) throw ConfigError("config key '" + key + "' has no value");
    opt->run_callback();
  }
}

struct StudyFlags {
  std::vector<std::string> dgps;
  std::vector<int> Ts{1000};
  std::vector<double> pis{1.0, 0.25};
  std::vector<double> alphas{0.1, 0.05, 0.01};
  int reps = 500;
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out_dir;
  std::string format = "csv";
  std::string config_path;
};

void add_study_flags(CLI::App* cmd, StudyFlags& f, const std::string& default_out) {
  f.out_dir = default_out;
  cmd->add_option("--T", f.Ts, "sample sizes")->check(CLI::Range(4, 100000000));
  cmd->add_option("--pi", f.pis, "out-of-sample to in-sample ratios")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--alpha", f.alphas, "nominal levels in (0,1)")
      ->check(CLI::Range(1e-6, 0.999999));
  cmd->add_option("--reps", f.reps, "Monte Carlo replications")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", f.seed, "master seed");
  cmd->add_option("--threads", f.threads, "worker cap (0 = all cores)")
      ->check(CLI::Range(0, 4096));
  cmd->add_option("--out", f.out_dir, "output directory");
  cmd->add_option("--format", f.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--config", f.config_path,
                  "flat key=value config file; flags take precedence");
}

McConfig to_mc_config(const StudyFlags& f) {
  McConfig c;
  c.n_reps = f.reps;
  c.pi_grid = f.pis;
  c.alpha_grid = f.alphas;
  c.master_seed = f.seed;
  c.parallel_width = f.threads;
  return c;
}

ordered_json study_config_json(const StudyFlags& f, const std::vector<std::string>& dgps) {
  ordered_json j;
  j["dgp"] = dgps;
  j["T"] = f.Ts;
  j["pi"] = f.pis;
  j["alpha"] = f.alphas;
  j["reps"] = f.reps;
  j["master_seed"] = f.seed;
  j["threads"] = f.threads;
  j["format"] = f.format;
  return j;
}

ordered_json cells_to_json(const CoverageStudyResult& r) {
  ordered_json rows = ordered_json::array();
  for (const CoverageCell& c : r.cells) {
    rows.push_back({{"dgp", c.dgp},
                    {"T", c.T},
                    {"pi", c.pi},
                    {"alpha", c.alpha},
                    {"coverage", c.coverage},
                    {"n_ok", c.n_ok},
                    {"n_errors", c.n_errors}});
  }
  return rows;
}

int run_coverage(const StudyFlags& flags, const std::vector<std::string>& dgp_names,
                 bool samples_only) {
  std::vector<DgpKind> dgps;
  for (const std::string& name : dgp_names) dgps.push_back(dgp_kind_from_name(name));

  const CoverageStudyResult result = run_coverage_study(to_mc_config(flags), dgps, flags.Ts);

  RunOutput out(samples_only ? "er-hist" : "coverage", flags.out_dir,
                study_config_json(flags, dgp_names));
  if (samples_only) {
    out.write_text("er_samples.csv", result.samples_csv());
  } else {
    out.write_text("coverage_table.csv", result.table_csv());
    out.write_text("coverage_samples.csv", result.samples_csv());
    if (flags.format == "json") out.write_json("coverage_table.json", cells_to_json(result));
  }
  out.finalize();

  if (!samples_only) std::cout << result.table_csv();
  if (result.error_count > 0) {
    std::cerr << result.error_count << " replication(s) failed and were excluded\n";
  }
  if (result.nonconverged_count > 0) {
    std::cerr << "warning: " << result.nonconverged_count
              << " lasso fit(s) stopped before reaching tolerance\n";
  }
  std::cout << "wrote " << out.dir().string() << "\n";
  return 0;
}

struct MdhFeatureFlags {
  int lags = 30;
  bool interactions = true;
  std::vector<int> powers{2, 3, 4};
  bool standardize = true;
  int ols_lags = 30;
  int cv_k = 2;
};

void add_mdh_feature_flags(CLI::App* cmd, MdhFeatureFlags& f) {
  cmd->add_option("--lags", f.lags, "number of lags in the feature vector")
      ->check(CLI::Range(1, 1000));
  cmd->add_option("--interactions", f.interactions, "include pairwise lag interactions");
  cmd->add_option("--powers", f.powers, "lag power degrees, subset of {2,3,4}")
      ->check(CLI::IsMember({2, 3, 4}));
  cmd->add_option("--standardize", f.standardize, "scale features by train moments");
  cmd->add_option("--ols-lags", f.ols_lags, "linear lags of the ols benchmark")
      ->check(CLI::Range(1, 1000));
  cmd->add_option("--cv.k", f.cv_k, "blocked cross-validation blocks")->check(CLI::Range(1, 64));
}

MdhOptions to_mdh_options(const MdhFeatureFlags& f, double alpha) {
  MdhOptions o;
  o.features.lags = f.lags;
  o.features.interactions = f.interactions;
  o.features.power_degrees = std::set<int>(f.powers.begin(), f.powers.end());
  o.features.standardize = f.standardize;
  o.ols_lags = f.ols_lags;
  o.cv.k = f.cv_k;
  o.alpha = alpha;
  return o;
}

int run_power(const StudyFlags& flags, const std::vector<std::string>& dgp_names,
              const std::vector<std::string>& method_names, const MdhFeatureFlags& features) {
  std::vector<DgpKind> dgps;
  for (const std::string& name : dgp_names) dgps.push_back(dgp_kind_from_name(name));
  std::vector<MdhMethod> methods;
  for (const std::string& name : method_names) {
    if (name == "ols") {
      methods.push_back(MdhMethod::Ols);
    } else if (name == "ridge") {
      methods.push_back(MdhMethod::Ridge);
    } else if (name == "ap") {
      methods.push_back(MdhMethod::Ap);
    } else {
      throw ConfigError("unknown method '" + name + "' (use ols, ridge, ap)");
    }
  }

  const MdhOptions options = to_mdh_options(features, flags.alphas.front());
  const PowerStudyResult result =
      run_power_study(to_mc_config(flags), dgps, methods, flags.Ts, options);

  ordered_json config = study_config_json(flags, dgp_names);
  config["methods"] = method_names;
  config["lags"] = features.lags;
  config["interactions"] = features.interactions;
  config["powers"] = features.powers;
  config["ols_lags"] = features.ols_lags;
  config["cv.k"] = features.cv_k;

  RunOutput out("power", flags.out_dir, config);
  out.write_text("power_table.csv", result.table_csv());
  if (flags.format == "json") {
    ordered_json rows = ordered_json::array();
    for (const PowerCell& c : result.cells) {
      rows.push_back({{"dgp", c.dgp},
                      {"method", c.method},
                      {"T", c.T},
                      {"pi", c.pi},
                      {"alpha", c.alpha},
                      {"rejection_rate", c.rejection_rate},
                      {"n_ok", c.n_ok},
                      {"n_errors", c.n_errors}});
    }
    out.write_json("power_table.json", rows);
  }
  out.finalize();

  std::cout << result.table_csv();
  if (result.error_count > 0) {
    std::cerr << result.error_count << " test invocation(s) failed and were excluded\n";
  }
  std::cout << "wrote " << out.dir().string() << "\n";
  return 0;
}

struct MdhFileFlags {
  std::string input;
  std::string column = "close";
  std::string transform = "increments";
  double pi = 1.0;
  int R = 0;  // 0: use pi
  std::string learner = "ridge";
  double alpha = 0.05;
  std::string pair;
  std::string out_dir = "out_mdh";
  std::string format = "csv";
  std::string config_path;
};

int run_mdh_file(const MdhFileFlags& f, const MdhFeatureFlags& features) {
  const Series series = ingest_csv(f.input, f.column, transform_from_name(f.transform));
  for (const std::string& w : series.meta().warnings) std::cerr << "warning: " << w << "\n";
  const SplitPlan split =
      f.R > 0 ? split_by_insample(series.size(), f.R) : split_by_ratio(series.size(), f.pi);

  MdhTestReport report;
  if (f.learner == "ap") {
    const std::vector<double>& v = series.values();
    ApOptions ap;
    ap.alpha = f.alpha;
    report = auto_portmanteau(
        std::span<const double>(v.data() + split.R, static_cast<std::size_t>(split.P)), ap);
  } else if (f.learner == "ols" || f.learner == "ridge") {
    const MdhOptions options = to_mdh_options(features, f.alpha);
    report = mdh_test(series, split, f.learner == "ols" ? MdhLearner::Ols : MdhLearner::RidgeCv,
                      options);
  } else {
    throw ConfigError("unknown learner '" + f.learner + "' (use ols, ridge, ap)");
  }

  const std::string pair = f.pair.empty() ? series.name() : f.pair;
  const double pi_label = f.R > 0 ? split.pi : f.pi;
  std::string csv = "pair,method,pi,p_value\n";
  csv += pair + "," + report.method + "," + fmt(pi_label, "%g") + "," +
         fmt(report.p_value, "%.6f") + "\n";

  ordered_json config;
  config["input"] = f.input;
  config["column"] = f.column;
  config["transform"] = f.transform;
  config["pi"] = split.pi;
  config["R"] = split.R;
  config["learner"] = f.learner;
  config["alpha"] = f.alpha;
  config["lags"] = features.lags;
  config["interactions"] = features.interactions;
  config["powers"] = features.powers;
  config["standardize"] = features.standardize;
  config["cv.k"] = features.cv_k;

  RunOutput out("mdh", f.out_dir, config);
  out.write_text("mdh_result.csv", csv);
  if (f.format == "json") {
    ordered_json j;
    j["pair"] = pair;
    j["method"] = report.method;
    j["pi"] = split.pi;
    j["statistic"] = report.statistic;
    j["p_value"] = report.p_value;
    j["n_oos"] = report.n_oos;
    j["feature_dim"] = report.feature_dim;
    j["selected_lag"] = report.selected_lag;
    j["alpha"] = report.alpha;
    j["reject"] = report.reject;
    j["config_hash"] = report.config_hash;
    out.write_json("mdh_result.json", j);
  }
  out.finalize();

  std::cout << csv;
  std::cout << "wrote " << out.dir().string() << "\n";
  return 0;
}

struct DiagnoseFlags {
  std::string input;
  std::string column = "close";
  std::string transform = "increments";
  double pi = 0.25;
  std::string loss = "mspe";
  double huber_delta = 1.345;
  double asym_alpha = 1.0;
  double asym_beta = 1.0;
  std::string learner = "ridge";
  double lambda = -1.0;  // <0: cross-validate (ridge) or rate rule (lasso)
  double lambda_scale = 1.0;
  int lags = 5;
  bool interactions = false;
  std::vector<int> powers;
  bool standardize = false;
  int cv_k = 2;
  double threshold = 3.0;
  // network hyperparameters
  int dnn_depth = 1;
  int dnn_width = 8;
  double dnn_B = 10.0;
  double dnn_F = 10.0;
  double dnn_tau = 0.1;
  double dnn_lr = 0.01;
  int dnn_epochs = 200;
  int dnn_batch = 32;
  std::uint64_t dnn_seed = 0;
  std::string out_dir = "out_diagnose";
  std::string format = "csv";
  std::string config_path;
};

int run_diagnose(const DiagnoseFlags& f) {
  const Series series = ingest_csv(f.input, f.column, transform_from_name(f.transform));
  for (const std::string& w : series.meta().warnings) std::cerr << "warning: " << w << "\n";
  const SplitPlan split = split_by_ratio(series.size(), f.pi);
  const LossSpec loss = LossSpec::from_name(f.loss, f.huber_delta, f.asym_alpha, f.asym_beta);

  DesignMatrix design =
      build_features(series, f.lags, f.interactions, std::set<int>(f.powers.begin(), f.powers.end()));
  if (f.standardize) design = standardized(design, train_row_count(design, split));

  FittedModel model;
  if (f.learner == "ols") {
    model = fit_ols(design, split);
  } else if (f.learner == "ridge") {
    if (f.lambda >= 0.0) {
      model = fit_ridge(design, split, f.lambda);
    } else {
      BlockedCvConfig cv;
      cv.k = f.cv_k;
      model = fit_ridge_cv(design, split, cv);
    }
  } else if (f.learner == "lasso") {
    model = f.lambda >= 0.0 ? fit_lasso(design, split, f.lambda)
                            : fit_lasso(design, split, LambdaRule::scaled(f.lambda_scale));
  } else if (f.learner == "dnn") {
    const DnnArchitecture arch =
        DnnArchitecture::mlp(static_cast<int>(design.cols()), f.dnn_depth, f.dnn_width, f.dnn_B,
                             f.dnn_F, f.dnn_tau);
    DnnOptions opt;
    opt.learning_rate = f.dnn_lr;
    opt.epochs = f.dnn_epochs;
    opt.batch = f.dnn_batch;
    opt.seed = f.dnn_seed;
    const LossSpec fit_loss =
        loss.kind == LossKind::CrossEntropy ? loss : LossSpec::mspe();
    model = fit_dnn(design, split, arch, fit_loss, opt, std::max(f.lambda, 0.0));
  } else {
    throw ConfigError("unknown learner '" + f.learner + "' (use ols, ridge, lasso, dnn)");
  }

  const Eigen::Index n_train = train_row_count(design, split);
  const Eigen::Index P = design.rows() - n_train;
  const auto Xte = design.X.bottomRows(P);
  const auto yte = design.y.tail(P);
  const Eigen::VectorXd pred = model.predict_all(Xte);

  Eigen::VectorXd residuals(P);
  for (Eigen::Index t = 0; t < P; ++t) {
    switch (loss.kind) {
      case LossKind::CrossEntropy:
        residuals(t) = yte(t) - 1.0 / (1.0 + std::exp(-pred(t)));
        break;
      case LossKind::Covariance:
        residuals(t) = yte(t);
        break;
      default:
        residuals(t) = yte(t) - pred(t);
    }
  }

  Eigen::MatrixXd weights;
  if (f.learner == "dnn") {
    weights.resize(P, model.theta.size());
    for (Eigen::Index t = 0; t < P; ++t) {
      weights.row(t) = dnn_model_gradient(*model.arch, model.theta, Xte.row(t).transpose());
    }
  } else {
    weights = Xte;
  }

  const ScoreDiagnostic diag = zero_mean_score_diagnostic(loss, residuals, weights, f.threshold);

  std::string csv = "loss,learner,n,mean_score_norm,studentized,threshold,violation\n";
  csv += loss.name() + "," + f.learner + "," + std::to_string(diag.n) + "," +
         fmt(diag.mean_score_norm) + "," + fmt(diag.studentized) + "," + fmt(f.threshold, "%g") +
         "," + (diag.violation ? "1" : "0") + "\n";

  ordered_json config;
  config["input"] = f.input;
  config["column"] = f.column;
  config["transform"] = f.transform;
  config["pi"] = f.pi;
  config["loss"] = loss.name();
  config["learner"] = f.learner;
  config["lambda"] = f.lambda;
  config["lags"] = f.lags;
  config["interactions"] = f.interactions;
  config["standardize"] = f.standardize;
  config["threshold"] = f.threshold;

  RunOutput out("diagnose-score", f.out_dir, config);
  out.write_text("score_diagnostic.csv", csv);
  if (f.format == "json") {
    ordered_json j;
    j["loss"] = loss.name();
    j["learner"] = f.learner;
    j["n"] = diag.n;
    j["mean_score_norm"] = diag.mean_score_norm;
    j["studentized"] = diag.studentized;
    j["threshold"] = f.threshold;
    j["violation"] = diag.violation;
    j["small_sample"] = diag.small_sample;
    out.write_json("score_diagnostic.json", j);
  }
  out.finalize();

  std::cout << csv;
  if (diag.small_sample) std::cerr << "warning: fewer than 30 evaluation observations\n";
  if (diag.violation) {
    std::cerr << "warning: zero-mean score condition flagged (studentized "
              << fmt(diag.studentized, "%.3f") << " > " << fmt(f.threshold, "%g") << ")\n";
  }
  std::cout << "wrote " << out.dir().string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Out-of-sample predictive-ability inference and MDH testing"};
  app.require_subcommand(1);

  // coverage
  StudyFlags cov_flags;
  std::vector<std::string> cov_dgps{"fast-rates"};
  CLI::App* cov = app.add_subcommand("coverage", "confidence-interval coverage study");
  cov->add_option("--dgp", cov_dgps,
                  "decreasing-sparsity, multicollinearity and/or fast-rates");
  add_study_flags(cov, cov_flags, "out_coverage");

  // power
  StudyFlags pow_flags;
  std::vector<std::string> pow_dgps{"garch11"};
  std::vector<std::string> pow_methods{"ols", "ridge", "ap"};
  MdhFeatureFlags pow_features;
  CLI::App* pow = app.add_subcommand("power", "MDH test size/power study");
  pow->add_option("--dgp", pow_dgps, "garch11, ar1-garch, exp1, nlma and/or ar4-exp1");
  pow->add_option("--methods", pow_methods, "ols, ridge and/or ap");
  add_mdh_feature_flags(pow, pow_features);
  add_study_flags(pow, pow_flags, "out_power");

  // er-hist
  StudyFlags er_flags;
  er_flags.pis = {1.0};
  std::vector<std::string> er_dgps{"decreasing-sparsity"};
  CLI::App* er = app.add_subcommand("er-hist", "per-replication delta/er samples for histograms");
  er->add_option("--dgp", er_dgps, "linear regression dgps");
  add_study_flags(er, er_flags, "out_er_hist");

  // mdh on a file
  MdhFileFlags mdh_flags;
  MdhFeatureFlags mdh_features;
  CLI::App* mdh = app.add_subcommand("mdh", "martingale-difference test on a CSV series");
  mdh->add_option("--input", mdh_flags.input, "CSV file")->required();
  mdh->add_option("--column", mdh_flags.column, "price column name or index");
  mdh->add_option("--transform", mdh_flags.transform, "increments, log_returns or none")
      ->check(CLI::IsMember({"increments", "log_returns", "none"}));
  mdh->add_option("--pi", mdh_flags.pi, "out-of-sample to in-sample ratio")
      ->check(CLI::PositiveNumber);
  mdh->add_option("--R", mdh_flags.R, "explicit in-sample size (overrides --pi)");
  mdh->add_option("--learner", mdh_flags.learner, "ols, ridge or ap");
  mdh->add_option("--alpha", mdh_flags.alpha, "test level")->check(CLI::Range(1e-6, 0.999999));
  mdh->add_option("--pair", mdh_flags.pair, "label for the output row (default: column)");
  mdh->add_option("--out", mdh_flags.out_dir, "output directory");
  mdh->add_option("--format", mdh_flags.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  add_mdh_feature_flags(mdh, mdh_features);
  mdh->add_option("--config", mdh_flags.config_path,
                  "flat key=value config file; flags take precedence");

  // diagnose-score
  DiagnoseFlags diag_flags;
  CLI::App* diag = app.add_subcommand("diagnose-score", "zero-mean-score diagnostic on a CSV series");
  diag->add_option("--input", diag_flags.input, "CSV file")->required();
  diag->add_option("--column", diag_flags.column, "price column name or index");
  diag->add_option("--transform", diag_flags.transform, "increments, log_returns or none")
      ->check(CLI::IsMember({"increments", "log_returns", "none"}));
  diag->add_option("--pi", diag_flags.pi, "out-of-sample to in-sample ratio")
      ->check(CLI::PositiveNumber);
  diag->add_option("--loss", diag_flags.loss,
                   "mspe, mad, huber, asmspe, logcosh, cross-entropy or covariance");
  diag->add_option("--delta", diag_flags.huber_delta, "huber switch point")
      ->check(CLI::PositiveNumber);
  diag->add_option("--asym-alpha", diag_flags.asym_alpha, "asmspe weight, positive errors")
      ->check(CLI::PositiveNumber);
  diag->add_option("--asym-beta", diag_flags.asym_beta, "asmspe weight, negative errors")
      ->check(CLI::PositiveNumber);
  diag->add_option("--learner", diag_flags.learner, "ols, ridge, lasso or dnn");
  diag->add_option("--lambda", diag_flags.lambda,
                   "penalty (ridge/lasso/dnn); negative selects cv or the rate rule");
  diag->add_option("--lambda-scale", diag_flags.lambda_scale,
                   "constant c of the scaled sqrt(log p / R) lasso rule")
      ->check(CLI::PositiveNumber);
  diag->add_option("--lags", diag_flags.lags, "feature lags")->check(CLI::Range(1, 1000));
  diag->add_option("--interactions", diag_flags.interactions, "pairwise lag interactions");
  diag->add_option("--powers", diag_flags.powers, "lag power degrees, subset of {2,3,4}")
      ->check(CLI::IsMember({2, 3, 4}));
  diag->add_option("--standardize", diag_flags.standardize, "scale features by train moments");
  diag->add_option("--cv.k", diag_flags.cv_k, "blocked cross-validation blocks")
      ->check(CLI::Range(1, 64));
  diag->add_option("--threshold", diag_flags.threshold, "studentized violation threshold")
      ->check(CLI::PositiveNumber);
  diag->add_option("--dnn.depth", diag_flags.dnn_depth)->check(CLI::Range(0, 16));
  diag->add_option("--dnn.width", diag_flags.dnn_width)->check(CLI::Range(1, 4096));
  diag->add_option("--dnn.B", diag_flags.dnn_B)->check(CLI::PositiveNumber);
  diag->add_option("--dnn.F", diag_flags.dnn_F)->check(CLI::PositiveNumber);
  diag->add_option("--dnn.tau", diag_flags.dnn_tau)->check(CLI::PositiveNumber);
  diag->add_option("--dnn.lr", diag_flags.dnn_lr)->check(CLI::PositiveNumber);
  diag->add_option("--dnn.epochs", diag_flags.dnn_epochs)->check(CLI::PositiveNumber);
  diag->add_option("--dnn.batch", diag_flags.dnn_batch)->check(CLI::PositiveNumber);
  diag->add_option("--dnn.seed", diag_flags.dnn_seed);
  diag->add_option("--out", diag_flags.out_dir, "output directory");
  diag->add_option("--format", diag_flags.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  diag->add_option("--config", diag_flags.config_path,
                   "flat key=value config file; flags take precedence");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }

  try {
    if (cov->parsed()) {
      apply_config(cov, cov_flags.config_path);
      return run_coverage(cov_flags, cov_dgps, false);
    }
    if (pow->parsed()) {
      apply_config(pow, pow_flags.config_path);
      return run_power(pow_flags, pow_dgps, pow_methods, pow_features);
    }
    if (er->parsed()) {
      apply_config(er, er_flags.config_path);
      er_flags.alphas = {0.05};
      return run_coverage(er_flags, er_dgps, true);
    }
    if (mdh->parsed()) {
      apply_config(mdh, mdh_flags.config_path);
      return run_mdh_file(mdh_flags, mdh_features);
    }
    if (diag->parsed()) {
      apply_config(diag, diag_flags.config_path);
      return run_diagnose(diag_flags);
    }
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
