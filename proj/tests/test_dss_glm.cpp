#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "dss/csv.hpp"
#include "dss/dataset.hpp"
#include "dss/errors.hpp"
#include "dss/glm.hpp"

namespace {

std::string scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "dss_test_glm";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

double logistic(double t) { return 1.0 / (1.0 + std::exp(-t)); }

dss::PredictionDesign random_design(int n, int p, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  dss::PredictionDesign d;
  d.Xtilde.resize(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) d.Xtilde(i, j) = nd(gen);
  // center and unit-scale so the intercept-free cases are well behaved
  for (int j = 0; j < p; ++j) {
    const double mu = d.Xtilde.col(j).mean();
    d.Xtilde.col(j).array() -= mu;
    d.Xtilde.col(j) /= std::sqrt(d.Xtilde.col(j).squaredNorm() / (n - 1));
  }
  return d;
}

Eigen::VectorXd probs_from(const dss::PredictionDesign& d, const Eigen::VectorXd& beta,
                           double alpha = 0.0) {
  Eigen::VectorXd pi(d.rows());
  const Eigen::VectorXd eta = d.Xtilde * beta;
  for (int i = 0; i < d.rows(); ++i) pi(i) = logistic(alpha + eta(i));
  return dss::clamp_probs(pi);
}

// data term only, via the two weighted pseudo-outcomes per row
double pseudo_objective(const Eigen::VectorXd& gamma, const dss::PredictionDesign& d,
                        const Eigen::VectorXd& pi, double intercept) {
  double acc = 0.0;
  for (int i = 0; i < d.rows(); ++i) {
    const double eta = intercept + d.Xtilde.row(i).dot(gamma);
    const double nll1 = std::log1p(std::exp(eta)) - eta;  // outcome 1
    const double nll0 = std::log1p(std::exp(eta));        // outcome 0
    acc += pi(i) * nll1 + (1.0 - pi(i)) * nll0;
  }
  return acc / d.rows();
}

// full Newton with step halving on (intercept, gamma), no penalty
void newton_logistic(const dss::PredictionDesign& d, const Eigen::VectorXd& pi,
                     double* alpha, Eigen::VectorXd* gamma) {
  const int n = d.rows(), p = d.cols();
  Eigen::MatrixXd z(n, p + 1);
  z.col(0).setOnes();
  z.rightCols(p) = d.Xtilde;
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(p + 1);
  auto value = [&](const Eigen::VectorXd& th) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      const double eta = z.row(i).dot(th);
      acc += std::log1p(std::exp(eta)) - pi(i) * eta;
    }
    return acc / n;
  };
  for (int it = 0; it < 200; ++it) {
    Eigen::VectorXd mu(n), w(n);
    for (int i = 0; i < n; ++i) {
      mu(i) = logistic(z.row(i).dot(theta));
      w(i) = std::max(mu(i) * (1.0 - mu(i)), 1e-10);
    }
    const Eigen::VectorXd grad = z.transpose() * (mu - pi) / n;
    if (grad.cwiseAbs().maxCoeff() < 1e-12) break;
    const Eigen::MatrixXd hess = z.transpose() * w.asDiagonal() * z / n;
    const Eigen::VectorXd step = hess.ldlt().solve(grad);
    double t = 1.0;
    const double f0 = value(theta);
    while (t > 1e-8 && value(theta - t * step) > f0) t *= 0.5;
    theta -= t * step;
  }
  *alpha = theta(0);
  *gamma = theta.tail(p);
}

dss::PosteriorDraws draws_around(const Eigen::VectorXd& center, int s, unsigned seed,
                                 double spread) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  dss::PosteriorDraws d;
  d.prior = "synthetic";
  d.beta.resize(s, center.size());
  d.sigma2 = Eigen::VectorXd::Ones(s);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < center.size(); ++j) d.beta(i, j) = center(j) + spread * nd(gen);
  return d;
}

}  // namespace

TEST_CASE("zero coefficients give the log-two objective") {
  const dss::PredictionDesign d = random_design(40, 4, 3);
  Eigen::VectorXd beta(4);
  beta << 0.8, -0.5, 0.2, 0.0;
  const Eigen::VectorXd pi = probs_from(d, beta);
  const double got = dss::logistic_dss_objective(Eigen::VectorXd::Zero(4), d, pi, 0.0);
  CHECK(got == doctest::Approx(std::log(2.0)).epsilon(1e-12));

  // the l1 term adds lambda * ||gamma||_1
  Eigen::VectorXd gm(4);
  gm << 1.0, -2.0, 0.0, 0.5;
  const double base = dss::logistic_dss_objective(gm, d, pi, 0.0);
  const double pen = dss::logistic_dss_objective(gm, d, pi, 0.25);
  CHECK(pen - base == doctest::Approx(0.25 * 3.5).epsilon(1e-12));
}

TEST_CASE("the objective equals the weighted two-row pseudo-data form") {
  const dss::PredictionDesign d = random_design(60, 5, 7);
  Eigen::VectorXd beta(5);
  beta << 1.1, -0.7, 0.4, 0.0, -0.2;
  const Eigen::VectorXd pi = probs_from(d, beta, 0.3);
  std::mt19937_64 gen(11);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 25; ++trial) {
    Eigen::VectorXd gm(5);
    for (int j = 0; j < 5; ++j) gm(j) = nd(gen);
    const double alpha = nd(gen);
    const double direct = dss::logistic_dss_objective(gm, d, pi, 0.0, alpha);
    const double pseudo = pseudo_objective(gm, d, pi, alpha);
    CHECK(direct == doctest::Approx(pseudo).epsilon(1e-10));
  }
}

TEST_CASE("analytic gradient agrees with central differences") {
  const dss::PredictionDesign d = random_design(50, 4, 13);
  Eigen::VectorXd beta(4);
  beta << 0.9, -0.6, 0.3, -0.1;
  const Eigen::VectorXd pi = probs_from(d, beta);
  std::mt19937_64 gen(17);
  std::normal_distribution<double> nd;
  const double h = 1e-5;
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::VectorXd gm(4);
    for (int j = 0; j < 4; ++j) gm(j) = 0.5 * nd(gen);
    Eigen::VectorXd eta = d.Xtilde * gm;
    Eigen::VectorXd fitted(50);
    for (int i = 0; i < 50; ++i) fitted(i) = logistic(eta(i));
    const Eigen::VectorXd grad = d.Xtilde.transpose() * (fitted - pi) / 50.0;
    for (int j = 0; j < 4; ++j) {
      Eigen::VectorXd up = gm, dn = gm;
      up(j) += h;
      dn(j) -= h;
      const double fd = (dss::logistic_dss_objective(up, d, pi, 0.0) -
                         dss::logistic_dss_objective(dn, d, pi, 0.0)) /
                        (2.0 * h);
      CHECK(grad(j) == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("the penalized objective is convex along chords") {
  const dss::PredictionDesign d = random_design(45, 4, 19);
  Eigen::VectorXd beta(4);
  beta << 1.0, -0.4, 0.2, 0.6;
  const Eigen::VectorXd pi = probs_from(d, beta);
  std::mt19937_64 gen(23);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd a(4), b(4);
    for (int j = 0; j < 4; ++j) {
      a(j) = nd(gen);
      b(j) = nd(gen);
    }
    const double lam = 0.1 * std::abs(nd(gen));
    const double fa = dss::logistic_dss_objective(a, d, pi, lam);
    const double fb = dss::logistic_dss_objective(b, d, pi, lam);
    const double fm = dss::logistic_dss_objective(0.5 * (a + b), d, pi, lam);
    CHECK(fm <= 0.5 * (fa + fb) + 1e-10);
  }
}

TEST_CASE("probability preparation clamps and validates") {
  Eigen::VectorXd raw(4);
  raw << -0.5, 0.0, 0.5, 1.5;
  const Eigen::VectorXd cl = dss::clamp_probs(raw);
  CHECK(cl(0) == 1e-8);
  CHECK(cl(1) == 1e-8);
  CHECK(cl(2) == 0.5);
  CHECK(cl(3) == 1.0 - 1e-8);

  Eigen::VectorXd nanv(2);
  nanv << 0.5, std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(dss::clamp_probs(nanv), dss::ArgumentError);

  const dss::PredictionDesign d = random_design(4, 2, 29);
  Eigen::VectorXd bad(4);
  bad << 0.0, 0.5, 0.5, 0.5;  // exact zero must be clamped before use
  CHECK_THROWS_AS(dss::logistic_dss_objective(Eigen::VectorXd::Zero(2), d, bad, 0.0),
                  dss::ArgumentError);
}

TEST_CASE("posterior mean probabilities average the drawwise logistic fits") {
  const dss::PredictionDesign d = random_design(30, 3, 31);
  Eigen::VectorXd beta(3);
  beta << 1.2, -0.8, 0.3;
  const dss::PosteriorDraws dr = draws_around(beta, 400, 5, 0.2);
  const Eigen::VectorXd got = dss::posterior_mean_probs(dr, d);
  for (int i = 0; i < 30; ++i) {
    double acc = 0.0;
    for (int s = 0; s < 400; ++s)
      acc += logistic(d.Xtilde.row(i).dot(dr.beta.row(s)));
    CHECK(got(i) == doctest::Approx(acc / 400).epsilon(1e-12));
    CHECK(got(i) > 0.0);
    CHECK(got(i) < 1.0);
  }
}

TEST_CASE("grid construction starts at an all-zero solution") {
  const dss::PredictionDesign d = random_design(80, 5, 37);
  Eigen::VectorXd beta(5);
  beta << 1.4, -0.9, 0.5, 0.0, 0.0;
  const Eigen::VectorXd pi = probs_from(d, beta, -0.4);
  const std::vector<double> grid = dss::default_glm_grid(d, pi, 30);
  REQUIRE(grid.size() == 30);
  for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] < grid[i - 1]);

  const dss::GlmPath path = dss::logistic_solve_path(d, pi, grid);
  REQUIRE(path.entries.size() == 30);
  CHECK(path.entries.front().cardinality == 0);
  CHECK(path.entries.front().gamma.cwiseAbs().maxCoeff() == 0.0);
  // with gamma pinned at zero the best intercept matches the mean probability
  CHECK(logistic(path.entries.front().intercept) ==
        doctest::Approx(pi.mean()).epsilon(1e-6));
  CHECK(path.entries.back().cardinality >= 3);

  CHECK_THROWS_AS(dss::logistic_solve_path(d, pi, {}), dss::ArgumentError);
  CHECK_THROWS_AS(dss::logistic_solve_path(d, pi, {0.1, 0.2}), dss::ArgumentError);
}

TEST_CASE("symmetric probabilities on a centered design need no coefficients") {
  const dss::PredictionDesign d = random_design(60, 4, 41);
  const Eigen::VectorXd pi = Eigen::VectorXd::Constant(60, 0.5);
  const dss::GlmPath path = dss::logistic_solve_path(d, pi, {0.0});
  CHECK(std::abs(path.entries[0].intercept) < 1e-6);
  CHECK(path.entries[0].gamma.cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("the unpenalized end of the path matches a damped Newton solver") {
  const dss::PredictionDesign d = random_design(120, 5, 43);
  Eigen::VectorXd beta(5);
  beta << 1.0, -0.7, 0.45, 0.0, 0.2;
  const Eigen::VectorXd pi = probs_from(d, beta, 0.25);
  const dss::GlmPath path = dss::logistic_solve_path(d, pi, {0.0});
  double alpha_star = 0.0;
  Eigen::VectorXd gamma_star;
  newton_logistic(d, pi, &alpha_star, &gamma_star);
  CHECK(std::abs(path.entries[0].intercept - alpha_star) < 1e-5);
  CHECK((path.entries[0].gamma - gamma_star).cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("logistic excess error is nonnegative and vanishes on an exact match") {
  const dss::PredictionDesign d = random_design(50, 4, 47);
  Eigen::VectorXd beta(4);
  beta << 0.9, -0.6, 0.35, -0.15;

  dss::GlmPathEntry entry;
  entry.lambda = 0.1;
  entry.intercept = 0.0;
  entry.gamma = beta;
  entry.support = {0, 1, 2, 3};
  entry.cardinality = 4;

  // point-mass posterior at the entry's own coefficients: zero excess error
  const dss::PosteriorDraws point = draws_around(beta, 150, 3, 0.0);
  const Eigen::VectorXd psi0 = dss::logistic_psi_draws(entry, point, d);
  CHECK(psi0.cwiseAbs().maxCoeff() < 1e-12);

  // spread posterior: psi stays nonnegative and matches a direct recomputation
  const dss::PosteriorDraws dr = draws_around(beta, 300, 9, 0.3);
  const Eigen::VectorXd psi = dss::logistic_psi_draws(entry, dr, d);
  Eigen::VectorXd eta_lam = d.Xtilde * entry.gamma;
  for (int s = 0; s < 300; ++s) {
    CHECK(psi(s) >= 0.0);
    double gap = 0.0, noise = 0.0;
    for (int i = 0; i < 50; ++i) {
      const double ps = logistic(d.Xtilde.row(i).dot(dr.beta.row(s)));
      const double pl = logistic(entry.intercept + eta_lam(i));
      gap += (ps - pl) * (ps - pl);
      noise += ps * (1.0 - ps);
    }
    const double want = std::sqrt((gap + noise) / 50.0) - std::sqrt(noise / 50.0);
    CHECK(psi(s) == doctest::Approx(want).epsilon(1e-10));
  }
  CHECK(psi == dss::logistic_psi_draws(entry, dr, d, dss::Exec::Serial));
}

TEST_CASE("random-walk sampler recovers an easy logistic signal deterministically") {
  const int n = 300, p = 3;
  const dss::PredictionDesign d = random_design(n, p, 53);
  Eigen::VectorXd beta(p);
  beta << 1.5, -1.0, 0.0;
  std::mt19937_64 gen(59);
  std::uniform_real_distribution<double> ud;
  Eigen::VectorXd z(n);
  for (int i = 0; i < n; ++i)
    z(i) = ud(gen) < logistic(d.Xtilde.row(i).dot(beta)) ? 1.0 : 0.0;

  dss::LogisticRwOptions opt;
  opt.draws = 4000;
  opt.burn = 1000;
  const dss::PosteriorDraws dr = dss::sample_logistic_rw(d.Xtilde, z, opt, {61, 0});
  dr.validate();
  CHECK(dr.prior == "logistic-rw");
  CHECK((dr.sigma2.array() == 1.0).all());
  CHECK(dr.beta.col(0).mean() > 0.8);
  CHECK(dr.beta.col(1).mean() < -0.5);
  CHECK(std::abs(dr.beta.col(2).mean()) < 0.4);

  const dss::PosteriorDraws again = dss::sample_logistic_rw(d.Xtilde, z, opt, {61, 0});
  CHECK(dr.beta == again.beta);

  Eigen::VectorXd bad = z;
  bad(4) = 0.5;
  CHECK_THROWS_AS(dss::sample_logistic_rw(d.Xtilde, bad, opt, {61, 0}), dss::ArgumentError);
}

TEST_CASE("glm summaries retain the least-shrunk entry per size") {
  const dss::PredictionDesign d = random_design(150, 6, 67);
  Eigen::VectorXd beta(6);
  beta << 1.6, -1.1, 0.7, 0.0, 0.0, 0.0;
  const dss::PosteriorDraws dr = draws_around(beta, 500, 13, 0.15);
  const Eigen::VectorXd pi = dss::posterior_mean_probs(dr, d);
  const dss::GlmPath path = dss::logistic_solve_path(d, pi, dss::default_glm_grid(d, pi));
  const dss::GlmSummary s = dss::glm_summarize(path, dr, d);

  REQUIRE(!s.rows.empty());
  CHECK(s.rows.front().cardinality == 0);
  for (std::size_t i = 1; i < s.rows.size(); ++i) {
    CHECK(s.rows[i].cardinality > s.rows[i - 1].cardinality);
  }
  for (const dss::GlmSummaryRow& r : s.rows) {
    CHECK(r.psi_lo <= r.psi_mean + 1e-12);
    CHECK(r.psi_mean <= r.psi_hi + 1e-12);
    CHECK(r.psi_lo >= 0.0);
    // retained lambda is the largest among path entries of that size
    for (const dss::GlmPathEntry& e : path.entries)
      if (e.cardinality == r.cardinality) CHECK(r.lambda >= e.lambda);
  }
  // more coefficients, less excess error on this well-separated problem
  CHECK(s.rows.back().psi_mean < s.rows.front().psi_mean);

  CHECK_THROWS_AS(dss::glm_summarize(path, draws_around(beta, 50, 1, 0.1), d),
                  dss::ArgumentError);
}

TEST_CASE("glm path and summary tables use the shared csv schemas") {
  const dss::PredictionDesign d = random_design(100, 4, 71);
  Eigen::VectorXd beta(4);
  beta << 1.2, -0.8, 0.4, 0.0;
  const dss::PosteriorDraws dr = draws_around(beta, 300, 17, 0.2);
  const Eigen::VectorXd pi = dss::posterior_mean_probs(dr, d);
  const dss::GlmPath path = dss::logistic_solve_path(d, pi, dss::default_glm_grid(d, pi, 20));
  const dss::GlmSummary s = dss::glm_summarize(path, dr, d);

  const std::string ppath = scratch("glm_path.csv");
  dss::write_glm_path_csv(ppath, path);
  const dss::CsvTable pt = dss::read_csv(ppath);
  CHECK(pt.header[0] == "lambda");
  CHECK(pt.header[1] == "cardinality");
  CHECK(pt.header[2] == "intercept");
  CHECK(pt.header[3] == "gamma_1");
  REQUIRE(pt.rows.size() == path.entries.size());
  CHECK(dss::parse_number(pt.rows[0][2], 0, 0) == path.entries[0].intercept);

  const std::string spath = scratch("glm_summary.csv");
  dss::write_glm_summary_csv(spath, s);
  const dss::CsvTable st = dss::read_csv(spath);
  REQUIRE(st.rows.size() == s.rows.size());
  const int rho_col = st.col("rho_mean");
  REQUIRE(rho_col >= 0);
  for (const auto& row : st.rows) CHECK(row[static_cast<std::size_t>(rho_col)] == "nan");
  const int psi_col = st.col("psi_mean");
  REQUIRE(psi_col >= 0);
  CHECK(dss::parse_number(st.rows[0][static_cast<std::size_t>(psi_col)], 0, 0) ==
        s.rows[0].psi_mean);
}
