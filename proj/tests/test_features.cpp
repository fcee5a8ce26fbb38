#include <doctest.h>

#include <vector>

#include "oosinfer/errors.hpp"
#include "oosinfer/features.hpp"
#include "oosinfer/rng.hpp"

using namespace oosinfer;

namespace {

Series random_series(int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(static_cast<std::size_t>(n));
  for (double& x : v) x = rng.normal();
  return Series(std::move(v), "sim");
}

}  // namespace

TEST_CASE("column counts match the closed form") {
  CHECK(feature_column_count(30, true, {2, 3, 4}) == 556);
  CHECK(feature_column_count(1, false, {}) == 2);
  CHECK(feature_column_count(2, true, {2}) == 6);
}

TEST_CASE("column count formula holds exhaustively for L <= 40") {
  const Series s = random_series(64, 7);
  const std::vector<std::set<int>> degree_sets{{}, {2}, {3}, {4}, {2, 3}, {2, 4}, {3, 4}, {2, 3, 4}};
  for (int L = 1; L <= 40; ++L) {
    for (bool inter : {false, true}) {
      for (const auto& degrees : degree_sets) {
        const DesignMatrix d = build_features(s, L, inter, degrees);
        const int expect = feature_column_count(L, inter, degrees);
        CHECK(d.cols() == expect);
        CHECK(static_cast<int>(d.column_names.size()) == expect);
        CHECK(d.rows() == s.size() - L);
      }
    }
  }
}

TEST_CASE("rows align targets with strictly prior observations") {
  std::vector<double> v{10, 11, 12, 13, 14, 15};
  const Series s(v, "ramp");
  const DesignMatrix d = build_features(s, 2, true, {2});
  // first row: target v[2]=12, lags v[1]=11, v[0]=10
  CHECK(d.y(0) == 12.0);
  CHECK(d.X(0, 0) == 1.0);
  CHECK(d.X(0, 1) == 11.0);
  CHECK(d.X(0, 2) == 10.0);
  CHECK(d.X(0, 3) == 11.0 * 10.0);  // lag1*lag2
  CHECK(d.X(0, 4) == 11.0 * 11.0);  // lag1^2
  CHECK(d.X(0, 5) == 10.0 * 10.0);  // lag2^2
  CHECK(d.column_names[3] == "lag1*lag2");
}

TEST_CASE("no leakage: future observations never enter a feature row") {
  const Series base = random_series(50, 3);
  const DesignMatrix d0 = build_features(base, 4, true, {2, 3});
  // Permute (here: overwrite) everything after time index t and rebuild.
  const int t = 20;
  std::vector<double> tampered = base.values();
  for (std::size_t i = t + 1; i < tampered.size(); ++i) tampered[i] = -99.0 - double(i);
  const DesignMatrix d1 = build_features(Series(tampered, "tampered"), 4, true, {2, 3});
  const int row = t - 4;  // row of target index t
  CHECK((d0.X.row(row) - d1.X.row(row)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(d0.y(row) == d1.y(row));
}

TEST_CASE("too short series raises insufficient data") {
  const Series s({1.0, 2.0, 3.0}, "short");
  CHECK_THROWS_AS(build_features(s, 2, false, {}), InsufficientDataError);
  CHECK_THROWS_AS(build_features(s, 1, false, {5}), ConfigError);
}

TEST_CASE("standardization uses train moments only and skips the intercept") {
  const Series s = random_series(200, 11);
  const DesignMatrix d = build_features(s, 3, false, {2});
  const Eigen::Index n_train = 120;
  const DesignMatrix z = standardized(d, n_train);
  CHECK(z.X.col(0).isConstant(1.0));
  for (Eigen::Index j = 1; j < z.cols(); ++j) {
    const auto head = z.X.col(j).head(n_train);
    CHECK(head.mean() == doctest::Approx(0.0).epsilon(1e-12));
    const double sd = std::sqrt((head.array() - head.mean()).square().sum() / double(n_train));
    CHECK(sd == doctest::Approx(1.0).epsilon(1e-12));
  }
}
