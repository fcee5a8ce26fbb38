#include <doctest.h>

#include <cmath>
#include <cstring>

#include "oosinfer/dgp.hpp"
#include "oosinfer/stats.hpp"

using namespace oosinfer;

namespace {

double acf(const std::vector<double>& v, int lag) {
  const std::span<const double> s(v);
  const double m = mean(s);
  double num = 0.0, den = 0.0;
  for (std::size_t t = 0; t < v.size(); ++t) den += (v[t] - m) * (v[t] - m);
  for (std::size_t t = static_cast<std::size_t>(lag); t < v.size(); ++t) {
    num += (v[t] - m) * (v[t - static_cast<std::size_t>(lag)] - m);
  }
  return num / den;
}

}  // namespace

TEST_CASE("decreasing sparsity rule") {
  CHECK(sparse_linear_sparsity(1000) == 5);
  CHECK(sparse_linear_sparsity(2000) == 18);
}

TEST_CASE("sparse linear draw: alternation, dimensions, analytic risk") {
  DgpSpec spec;
  spec.kind = DgpKind::SparseLinear;
  spec.T = 1000;
  spec.seed = 1;
  const SimDraw draw = generate(spec);
  REQUIRE(draw.design.has_value());
  CHECK(draw.design->rows() == 1000);
  CHECK(draw.design->cols() == 1000);
  CHECK(draw.true_risk == 1.0);
  const int s = sparse_linear_sparsity(1000);
  CHECK(s == 5);
  for (int j = 0; j < s; ++j) {
    CHECK(draw.theta0(j) == (j % 2 == 0 ? 1.0 : -1.0));
  }
  CHECK(draw.theta0.tail(1000 - s).lpNorm<Eigen::Infinity>() == 0.0);
  // truth map is the linear predictor at theta0
  Eigen::VectorXd x = Eigen::VectorXd::Ones(1000);
  CHECK(draw.truth(x) == doctest::Approx(draw.theta0.sum()));
  // the rule needs sqrt(p) > 27; way below that it cannot define a model
  DgpSpec tiny = spec;
  tiny.T = 200;
  CHECK_THROWS(generate(tiny));
}

TEST_CASE("fast rates and multicollinear sparsity") {
  DgpSpec fr;
  fr.kind = DgpKind::FastRatesLinear;
  fr.T = 300;
  const SimDraw a = generate(fr);
  CHECK((a.theta0.array() != 0.0).count() == 5);

  DgpSpec mc;
  mc.kind = DgpKind::Multicollinear;
  mc.T = 300;
  const SimDraw b = generate(mc);
  CHECK((b.theta0.array() != 0.0).count() == 15);
  // columns beyond the first hug the first one
  const Eigen::VectorXd diff = b.design->X.col(5) - b.design->X.col(0);
  const double sd = std::sqrt(diff.squaredNorm() / 300.0);
  CHECK(sd < 0.2);
}

TEST_CASE("garch draw matches its unconditional variance and fat tails") {
  DgpSpec spec;
  spec.kind = DgpKind::Garch11;
  spec.T = 20000;
  spec.seed = 7;
  const Series s = *generate(spec).series;
  CHECK(s.size() == 20000);
  const double var = variance(s.values());
  CHECK(std::abs(var - 1.0) < 0.1);  // omega / (1 - alpha - beta) = 1
  CHECK(sample_kurtosis(s.values()) > 3.0);
}

TEST_CASE("nlma has zero mean and vanishing autocorrelations") {
  DgpSpec spec;
  spec.kind = DgpKind::Nlma;
  spec.T = 20000;
  spec.seed = 11;
  const Series s = *generate(spec).series;
  CHECK(std::abs(mean(s.values())) < 0.03);
  for (int lag = 1; lag <= 5; ++lag) {
    CHECK(std::abs(acf(s.values(), lag)) < 0.03);
  }
}

TEST_CASE("ar1 garch carries first-order autocorrelation") {
  DgpSpec spec;
  spec.kind = DgpKind::Ar1Garch;
  spec.T = 20000;
  spec.seed = 13;
  const Series s = *generate(spec).series;
  CHECK(acf(s.values(), 1) == doctest::Approx(0.3).epsilon(0.2));
}

TEST_CASE("ar4 exp1 drifts positive with near-zero autocorrelation") {
  DgpSpec spec;
  spec.kind = DgpKind::Ar4Exp1;
  spec.T = 20000;
  spec.seed = 17;
  const Series s = *generate(spec).series;
  CHECK(mean(s.values()) > 1.0);
  CHECK(std::abs(acf(s.values(), 1)) < 0.1);
}

TEST_CASE("exp1 stays bounded in distribution") {
  DgpSpec spec;
  spec.kind = DgpKind::Exp1;
  spec.T = 20000;
  spec.seed = 19;
  const Series s = *generate(spec).series;
  CHECK(std::abs(mean(s.values())) < 0.1);
  CHECK(variance(s.values()) > 0.5);
  CHECK(variance(s.values()) < 3.0);
}

TEST_CASE("binary logistic draw lives on the box with binary targets") {
  DgpSpec spec;
  spec.kind = DgpKind::BinaryLogistic;
  spec.T = 500;
  spec.seed = 23;
  spec.logistic_dim = 3;
  const SimDraw draw = generate(spec);
  REQUIRE(draw.design.has_value());
  CHECK(draw.design->X.cwiseAbs().maxCoeff() <= 1.0);
  for (Eigen::Index i = 0; i < draw.design->y.size(); ++i) {
    const double y = draw.design->y(i);
    CHECK((y == 0.0 || y == 1.0));
  }
  Eigen::VectorXd x = Eigen::VectorXd::Zero(3);
  CHECK(draw.truth(x) == doctest::Approx(0.0));
}

TEST_CASE("draws are deterministic in the seed") {
  DgpSpec spec;
  spec.kind = DgpKind::Garch11;
  spec.T = 500;
  spec.seed = 29;
  const Series a = *generate(spec).series;
  const Series b = *generate(spec).series;
  CHECK(std::memcmp(a.values().data(), b.values().data(), sizeof(double) * a.values().size()) == 0);
  spec.seed = 30;
  const Series c = *generate(spec).series;
  CHECK(a.values() != c.values());
}

TEST_CASE("garch stationarity constraint is validated") {
  DgpSpec spec;
  spec.kind = DgpKind::Garch11;
  spec.garch_alpha = 0.5;
  spec.garch_beta = 0.6;
  CHECK_THROWS(generate(spec));
}
