#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dss/dataset.hpp"
#include "dss/draws.hpp"
#include "dss/errors.hpp"
#include "dss/horseshoe.hpp"

namespace {

std::string scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "dss_test_posterior";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

dss::Dataset synth(int n, int p, const Eigen::VectorXd& beta, double noise_sd,
                   unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd x(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) x(i, j) = nd(gen);
  Eigen::VectorXd y = x * beta;
  for (int i = 0; i < n; ++i) y(i) += noise_sd * nd(gen);
  std::vector<std::string> names;
  for (int j = 1; j <= p; ++j) names.push_back("x" + std::to_string(j));
  return dss::standardize(x, y, names);
}

}  // namespace

TEST_CASE("frozen-scale noise-scaled chain matches the conjugate posterior mean") {
  struct Problem {
    int n, p;
    unsigned seed;
  };
  for (const Problem& pr : {Problem{60, 5, 101}, Problem{80, 10, 102}, Problem{50, 3, 103}}) {
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(pr.p);
    beta(0) = 1.0;
    if (pr.p > 2) beta(2) = -0.7;
    const dss::Dataset d = synth(pr.n, pr.p, beta, 1.0, pr.seed);

    dss::HorseshoeOptions o;
    o.draws = 4000;
    o.burn = 500;
    o.frozen_scales = true;
    o.noise_scaled_global = true;
    o.keep_scales = false;
    const dss::PosteriorDraws dr = dss::sample_horseshoe(d, o, {pr.seed, 0});
    CHECK(dr.prior == "horseshoe-frozen");

    const Eigen::MatrixXd a =
        d.X.transpose() * d.X + Eigen::MatrixXd::Identity(pr.p, pr.p);
    const Eigen::VectorXd oracle = a.llt().solve(d.X.transpose() * d.Y);

    const Eigen::VectorXd ess = dss::effective_sample_size(dr.beta);
    for (int j = 0; j < pr.p; ++j) {
      const double mean = dr.beta.col(j).mean();
      const double sd = std::sqrt(
          (dr.beta.col(j).array() - mean).square().sum() / (dr.draws() - 1));
      const double mcse = sd / std::sqrt(ess(j));
      INFO("problem n=", pr.n, " p=", pr.p, " coordinate ", j);
      CHECK(std::abs(mean - oracle(j)) < 3.0 * mcse + 1e-12);
    }
  }
}

TEST_CASE("horseshoe recovers strong signals and shrinks noise") {
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(6);
  beta(0) = 3.0;
  beta(3) = -2.0;
  const dss::Dataset d = synth(150, 6, beta, 0.7, 7);

  dss::HorseshoeOptions o;
  o.draws = 1500;
  o.burn = 500;
  const dss::PosteriorDraws dr = dss::sample_horseshoe(d, o, {7, 0});
  dr.validate();
  CHECK(dr.prior == "horseshoe");
  CHECK(dr.lambda_local.rows() == dr.draws());
  CHECK(dr.lambda_global.size() == dr.draws());

  // standardized-scale truth
  Eigen::MatrixXd raw_x;
  Eigen::VectorXd raw_y;
  dss::unstandardize(d, raw_x, raw_y);
  const Eigen::VectorXd bls =
      (d.X.transpose() * d.X).ldlt().solve(d.X.transpose() * d.Y);
  for (int j : {0, 3}) {
    CHECK(std::abs(dr.beta.col(j).mean() - bls(j)) < 0.1);
  }
  for (int j : {1, 2, 4, 5}) {
    CHECK(std::abs(dr.beta.col(j).mean()) < 0.08);
  }

  const std::vector<bool> keep = dss::horseshoe_threshold(dr);
  CHECK(keep[0]);
  CHECK(keep[3]);
  CHECK_FALSE(keep[1]);
  CHECK_FALSE(keep[2]);
  CHECK_FALSE(keep[4]);
  CHECK_FALSE(keep[5]);

  const Eigen::VectorXd ess = dss::effective_sample_size(dr.beta);
  CHECK(ess.minCoeff() > 50.0);
}

TEST_CASE("threshold requires retained local scales") {
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(3);
  beta(0) = 1.0;
  const dss::Dataset d = synth(40, 3, beta, 1.0, 9);
  dss::HorseshoeOptions o;
  o.draws = 200;
  o.burn = 50;
  o.keep_scales = false;
  const dss::PosteriorDraws dr = dss::sample_horseshoe(d, o, {9, 0});
  CHECK_THROWS_AS(dss::horseshoe_threshold(dr), dss::ArgumentError);
}

TEST_CASE("identical configuration reproduces draws byte for byte") {
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(4);
  beta(1) = 1.5;
  const dss::Dataset d = synth(50, 4, beta, 1.0, 31);
  dss::HorseshoeOptions o;
  o.draws = 300;
  o.burn = 100;
  const dss::PosteriorDraws a = dss::sample_horseshoe(d, o, {123, 1});
  const dss::PosteriorDraws b = dss::sample_horseshoe(d, o, {123, 1});
  CHECK(a.beta == b.beta);
  CHECK(a.sigma2 == b.sigma2);

  const std::string fa = scratch("a.csv"), fb = scratch("b.csv");
  dss::write_draws_csv(fa, a);
  dss::write_draws_csv(fb, b);
  CHECK(slurp(fa) == slurp(fb));

  const dss::PosteriorDraws c = dss::sample_horseshoe(d, o, {124, 1});
  CHECK(a.beta != c.beta);
}

TEST_CASE("draws csv round trip is exact") {
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(3);
  beta(0) = -2.0;
  const dss::Dataset d = synth(40, 3, beta, 0.8, 55);
  dss::HorseshoeOptions o;
  o.draws = 150;
  o.burn = 50;
  const dss::PosteriorDraws dr = dss::sample_horseshoe(d, o, {55, 0});
  const std::string path = scratch("roundtrip_draws.csv");
  dss::write_draws_csv(path, dr);
  const dss::PosteriorDraws back = dss::read_draws_csv(path);
  CHECK(back.prior == "imported");
  REQUIRE(back.draws() == dr.draws());
  REQUIRE(back.p() == dr.p());
  CHECK(back.beta == dr.beta);
  CHECK(back.sigma2 == dr.sigma2);

  const std::string bad = scratch("bad_draws.csv");
  std::ofstream(bad) << "beta_1,sigma2\n1,1\n";
  CHECK_THROWS_AS(dss::read_draws_csv(bad), dss::SchemaError);
}

TEST_CASE("chains concatenate with distinct streams") {
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(3);
  beta(2) = 1.0;
  const dss::Dataset d = synth(45, 3, beta, 1.0, 77);
  dss::HorseshoeOptions o;
  o.draws = 200;
  o.burn = 50;
  o.chains = 2;
  const dss::PosteriorDraws dr = dss::sample_horseshoe(d, o, {77, 0});
  CHECK(dr.draws() == 400);
  CHECK(dr.beta.topRows(200) != dr.beta.bottomRows(200));

  dss::HorseshoeOptions one = o;
  one.chains = 1;
  const dss::PosteriorDraws first = dss::sample_horseshoe(d, one, {77, 0});
  const dss::PosteriorDraws second = dss::sample_horseshoe(d, one, {77, 1});
  CHECK(dr.beta.topRows(200) == first.beta);
  CHECK(dr.beta.bottomRows(200) == second.beta);
}

TEST_CASE("thinning subsamples the kept iterations") {
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(3);
  beta(0) = 1.0;
  const dss::Dataset d = synth(40, 3, beta, 1.0, 91);
  dss::HorseshoeOptions o;
  o.draws = 100;
  o.burn = 20;
  o.thin = 3;
  const dss::PosteriorDraws dr = dss::sample_horseshoe(d, o, {91, 0});
  CHECK(dr.draws() == 100);
  CHECK(dr.thin == 3);
  CHECK(dr.burn == 20);
}

TEST_CASE("sampler and validation reject malformed settings") {
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(3);
  beta(0) = 1.0;
  const dss::Dataset d = synth(30, 3, beta, 1.0, 13);
  dss::HorseshoeOptions o;
  o.draws = 0;
  CHECK_THROWS_AS(dss::sample_horseshoe(d, o, {1, 0}), dss::ArgumentError);
  o.draws = 10;
  o.thin = 0;
  CHECK_THROWS_AS(dss::sample_horseshoe(d, o, {1, 0}), dss::ArgumentError);

  dss::PosteriorDraws bad;
  bad.beta = Eigen::MatrixXd::Zero(5, 2);
  bad.sigma2 = Eigen::VectorXd::Ones(4);
  CHECK_THROWS_AS(bad.validate(), dss::ArgumentError);
  bad.sigma2 = Eigen::VectorXd::Ones(5);
  bad.sigma2(2) = -1.0;
  CHECK_THROWS_AS(bad.validate(), dss::NumericError);
  bad.sigma2(2) = 1.0;
  bad.beta(1, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(bad.validate(), dss::NumericError);
}
