// End-to-end checks of the command line tool: exit codes, output files,
// manifest bookkeeping and byte-identical reruns across worker counts.
#ifdef OOSINFER_CLI_PATH

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct CliResult {
  int exit_code = -1;
  std::string stdout_text;
  std::string stderr_text;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CliResult run_cli(const fs::path& workdir, const std::string& args) {
  const fs::path out = workdir / "stdout.txt";
  const fs::path err = workdir / "stderr.txt";
  const std::string cmd = "cd '" + workdir.string() + "' && '" + OOSINFER_CLI_PATH + "' " + args +
                          " > '" + out.string() + "' 2> '" + err.string() + "'";
  const int raw = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = raw < 0 ? raw : WEXITSTATUS(raw);
  r.stdout_text = slurp(out);
  r.stderr_text = slurp(err);
  return r;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_random_walk_csv(const fs::path& path, int n, unsigned seed) {
  std::ofstream out(path);
  out << "date,close\n";
  double p = 100.0;
  unsigned state = seed;
  for (int i = 0; i < n; ++i) {
    state = state * 1664525u + 1013904223u;
    p += (static_cast<double>(state % 20001) - 10000.0) / 1e6;
    out << "d" << i << "," << p << "\n";
  }
}

}  // namespace

TEST_CASE("coverage command writes tables, samples and a manifest") {
  const fs::path dir = fresh_dir("oosinfer_cli_cov");
  const CliResult r = run_cli(
      dir, "coverage --dgp fast-rates --T 300 --pi 1.0 --alpha 0.05 --reps 8 --seed 3 --out covd");
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(dir / "covd/coverage_table.csv"));
  CHECK(fs::exists(dir / "covd/coverage_samples.csv"));
  CHECK(fs::exists(dir / "covd/manifest.json"));
  const std::string manifest = slurp(dir / "covd/manifest.json");
  CHECK(manifest.find("coverage_table.csv") != std::string::npos);
  CHECK(manifest.find("coverage_samples.csv") != std::string::npos);
  CHECK(manifest.find("\"master_seed\": 3") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("study outputs are byte-identical across worker counts and reruns") {
  const fs::path dir = fresh_dir("oosinfer_cli_det");
  const std::string base = "coverage --dgp fast-rates --T 300 --pi 1.0 --reps 10  --seed 11 ";
  CHECK(run_cli(dir, base + "--threads 1 --out a").exit_code == 0);
  CHECK(run_cli(dir, base + "--threads 2 --out b").exit_code == 0);
  CHECK(slurp(dir / "a/coverage_samples.csv") == slurp(dir / "b/coverage_samples.csv"));
  CHECK(slurp(dir / "a/coverage_table.csv") == slurp(dir / "b/coverage_table.csv"));
  CHECK(!slurp(dir / "a/coverage_samples.csv").empty());
  fs::remove_all(dir);
}

TEST_CASE("usage errors name the offending option and exit 1") {
  const fs::path dir = fresh_dir("oosinfer_cli_usage");
  const CliResult bad_pi = run_cli(dir, "coverage --pi -1");
  CHECK(bad_pi.exit_code == 1);
  CHECK(bad_pi.stderr_text.find("pi") != std::string::npos);

  const CliResult unknown = run_cli(dir, "coverage --no-such-flag 3");
  CHECK(unknown.exit_code == 1);

  std::ofstream(dir / "bad.conf") << "not_a_key=1\n";
  const CliResult bad_key = run_cli(dir, "coverage --T 300 --reps 2 --config bad.conf");
  CHECK(bad_key.exit_code == 1);
  CHECK(bad_key.stderr_text.find("not_a_key") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("config file fills unset options, flags win") {
  const fs::path dir = fresh_dir("oosinfer_cli_conf");
  std::ofstream(dir / "run.conf") << "reps=6\nseed=9\nT=300\npi=1.0\ndgp=fast-rates\n";
  const CliResult r = run_cli(dir, "coverage --config run.conf --reps 4 --out c");
  CHECK(r.exit_code == 0);
  const std::string manifest = slurp(dir / "c/manifest.json");
  CHECK(manifest.find("\"reps\": 4") != std::string::npos);         // flag beats config
  CHECK(manifest.find("\"master_seed\": 9") != std::string::npos);  // config fills the rest
  fs::remove_all(dir);
}

TEST_CASE("mdh command emits one result row per run") {
  const fs::path dir = fresh_dir("oosinfer_cli_mdh");
  write_random_walk_csv(dir / "fx.csv", 400, 2024);
  const CliResult r = run_cli(dir,
                              "mdh --input fx.csv --column close --transform increments "
                              "--pi 1.0 --learner ridge --lags 6 --powers 2 --alpha 0.05 "
                              "--pair DEM/USD --out m");
  CHECK(r.exit_code == 0);
  CHECK(r.stdout_text.find("pair,method,pi,p_value") != std::string::npos);
  CHECK(r.stdout_text.find("DEM/USD,ridge,1,") != std::string::npos);
  CHECK(fs::exists(dir / "m/mdh_result.csv"));

  const CliResult missing = run_cli(dir, "mdh --input nope.csv --column close");
  CHECK(missing.exit_code == 2);
  fs::remove_all(dir);
}

TEST_CASE("diagnose-score command reports the studentized magnitude") {
  const fs::path dir = fresh_dir("oosinfer_cli_diag");
  write_random_walk_csv(dir / "fx.csv", 400, 77);
  const CliResult r = run_cli(dir,
                              "diagnose-score --input fx.csv --column close --loss mspe "
                              "--learner ridge --lags 4 --pi 0.25 --out d --format json");
  CHECK(r.exit_code == 0);
  CHECK(r.stdout_text.find("loss,learner,n,mean_score_norm,studentized,threshold,violation") !=
        std::string::npos);
  CHECK(fs::exists(dir / "d/score_diagnostic.json"));
  fs::remove_all(dir);
}

#endif  // OOSINFER_CLI_PATH
