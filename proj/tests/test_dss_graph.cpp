#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "dss/csv.hpp"
#include "dss/errors.hpp"
#include "dss/graph.hpp"

namespace {

std::string scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "dss_test_graph";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

// banded precision, well conditioned, with an exact dense inverse as covariance
Eigen::MatrixXd banded_covariance(int p, double offdiag) {
  Eigen::MatrixXd prec = Eigen::MatrixXd::Identity(p, p);
  for (int i = 0; i + 1 < p; ++i) {
    prec(i, i + 1) = offdiag;
    prec(i + 1, i) = offdiag;
  }
  return prec.inverse();
}

Eigen::MatrixXd random_covariance(int p, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd a(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) a(i, j) = nd(gen);
  Eigen::MatrixXd s = a * a.transpose() / p + Eigen::MatrixXd::Identity(p, p);
  return 0.5 * (s + s.transpose());
}

}  // namespace

TEST_CASE("objective value on the identity and the penalty term") {
  const int p = 4;
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(p, p);
  CHECK(dss::graph_dss_objective(eye, eye, 0.0) == doctest::Approx(p).epsilon(1e-14));

  Eigen::MatrixXd gm = eye;
  gm(0, 1) = gm(1, 0) = 0.2;
  gm(2, 3) = gm(3, 2) = -0.1;
  const double base = dss::graph_dss_objective(gm, eye, 0.0);
  const double pen = dss::graph_dss_objective(gm, eye, 0.5);
  // off-diagonal magnitudes count twice, once per triangle
  CHECK(pen - base == doctest::Approx(0.5 * 2.0 * 0.3).epsilon(1e-12));

  Eigen::MatrixXd notpd = eye;
  notpd(0, 0) = -1.0;
  CHECK_THROWS_AS(dss::graph_dss_objective(notpd, eye, 0.0), dss::ArgumentError);
  Eigen::MatrixXd skew = eye;
  skew(0, 1) = 0.3;
  CHECK_THROWS_AS(dss::graph_dss_objective(skew, eye, 0.0), dss::ArgumentError);
  CHECK_THROWS_AS(dss::graph_dss_objective(eye, skew, 0.0), dss::ArgumentError);
}

TEST_CASE("matrix derivative of the smooth part is the covariance minus the inverse") {
  const int p = 4;
  const Eigen::MatrixXd s = random_covariance(p, 5);
  Eigen::MatrixXd gm = random_covariance(p, 7);  // any SPD point
  const Eigen::MatrixXd grad = s - gm.inverse();
  const double h = 1e-6;
  for (int i = 0; i < p; ++i) {
    for (int j = i; j < p; ++j) {
      Eigen::MatrixXd up = gm, dn = gm;
      up(i, j) += h;
      dn(i, j) -= h;
      if (i != j) {
        up(j, i) += h;
        dn(j, i) -= h;
      }
      const double fd = (dss::graph_dss_objective(up, s, 0.0) -
                         dss::graph_dss_objective(dn, s, 0.0)) /
                        (2.0 * h);
      const double want = i == j ? grad(i, i) : 2.0 * grad(i, j);
      CHECK(fd == doctest::Approx(want).epsilon(1e-5));
    }
  }
}

TEST_CASE("zero penalty inverts the covariance") {
  const Eigen::MatrixXd s = random_covariance(5, 11);
  const std::vector<dss::PrecisionPathEntry> path = dss::graph_solve_path(s, {0.0});
  REQUIRE(path.size() == 1);
  CHECK((path[0].Gamma - s.inverse()).cwiseAbs().maxCoeff() < 1e-6);
  CHECK(path[0].edges.size() == 10);  // dense inverse: every pair connected
}

TEST_CASE("an identity covariance stays fully disconnected at every penalty") {
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(6, 6);
  for (double lam : {0.5, 0.1, 0.01}) {
    const std::vector<dss::PrecisionPathEntry> path = dss::graph_solve_path(eye, {lam});
    CHECK(path[0].edges.empty());
    CHECK((path[0].Gamma - eye).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("two-variable problems follow the soft-threshold closed form") {
  Eigen::MatrixXd s(2, 2);
  s << 1.3, 0.45, 0.45, 0.9;
  for (double lam : {0.6, 0.45, 0.2, 0.05}) {
    const std::vector<dss::PrecisionPathEntry> path = dss::graph_solve_path(s, {lam});
    Eigen::MatrixXd w = s;
    if (std::abs(s(0, 1)) <= lam) {
      w(0, 1) = w(1, 0) = 0.0;
    } else {
      const double v = s(0, 1) - lam * (s(0, 1) > 0 ? 1.0 : -1.0);
      w(0, 1) = w(1, 0) = v;
    }
    const Eigen::MatrixXd want = w.inverse();
    INFO("lambda=", lam);
    CHECK((path[0].Gamma - want).cwiseAbs().maxCoeff() < 1e-6);
    if (std::abs(s(0, 1)) <= lam) {
      CHECK(path[0].edges.empty());
      CHECK(path[0].Gamma(0, 1) == 0.0);
    } else {
      REQUIRE(path[0].edges.size() == 1);
      CHECK(path[0].edges[0] == std::pair<int, int>{0, 1});
    }
  }
}

TEST_CASE("path entries stay positive definite and label their edges exactly") {
  const Eigen::MatrixXd s = banded_covariance(7, 0.4);
  const std::vector<double> grid = dss::default_graph_grid(s);
  REQUIRE(grid.size() == 20);
  for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] < grid[i - 1]);

  const std::vector<dss::PrecisionPathEntry> path = dss::graph_solve_path(s, grid);
  REQUIRE(path.size() == grid.size());
  std::vector<std::size_t> counts;
  for (const dss::PrecisionPathEntry& e : path) {
    const Eigen::LLT<Eigen::MatrixXd> llt(e.Gamma);
    CHECK(llt.info() == Eigen::Success);
    CHECK((e.Gamma - e.Gamma.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    std::size_t listed = 0;
    for (int i = 0; i < 7; ++i) {
      for (int j = i + 1; j < 7; ++j) {
        const bool in_list =
            std::find(e.edges.begin(), e.edges.end(), std::pair<int, int>{i, j}) !=
            e.edges.end();
        if (e.Gamma(i, j) != 0.0) {
          CHECK(in_list);
          ++listed;
        } else {
          CHECK_FALSE(in_list);
        }
      }
    }
    CHECK(listed == e.edges.size());
    counts.push_back(e.edges.size());
  }
  // relaxations usually only add edges; note any exceptions without failing
  for (std::size_t i = 1; i < counts.size(); ++i) {
    if (counts[i] < counts[i - 1])
      std::cerr << "note: edge count dipped from " << counts[i - 1] << " to " << counts[i]
                << " at grid index " << i << "\n";
  }
  // small penalties recover the banded neighbor structure
  const dss::PrecisionPathEntry& dense = path.back();
  for (int i = 0; i + 1 < 7; ++i)
    CHECK(std::find(dense.edges.begin(), dense.edges.end(), std::pair<int, int>{i, i + 1}) !=
          dense.edges.end());
}

TEST_CASE("block sweeps ascend the dual and close the duality gap") {
  const Eigen::MatrixXd s = random_covariance(8, 13);
  const std::vector<double> grid = dss::default_graph_grid(s, 6);
  std::vector<double> dual;
  const std::vector<dss::PrecisionPathEntry> path = dss::graph_solve_path(s, grid, &dual);
  REQUIRE(!dual.empty());
  for (std::size_t i = 1; i < dual.size(); ++i) CHECK(dual[i] >= dual[i - 1] - 1e-8);

  // primal value at the final entry sits within the gap target of the dual
  const double primal = dss::graph_dss_objective(path.back().Gamma, s, grid.back());
  CHECK(primal - dual.back() >= -1e-9);
  CHECK(primal - dual.back() <= 2e-6);
}

TEST_CASE("grid construction and validation") {
  const Eigen::MatrixXd s = random_covariance(4, 17);
  const std::vector<double> grid = dss::default_graph_grid(s, 5);
  REQUIRE(grid.size() == 5);
  double mx = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j) mx = std::max(mx, std::abs(s(i, j)));
  CHECK(grid.front() == doctest::Approx(mx).epsilon(1e-12));
  CHECK(grid.back() == doctest::Approx(mx * 0.01).epsilon(1e-12));

  CHECK(dss::default_graph_grid(Eigen::MatrixXd::Identity(3, 3)) ==
        std::vector<double>{0.0});
  CHECK_THROWS_AS(dss::default_graph_grid(s, 0), dss::ArgumentError);
  CHECK_THROWS_AS(dss::graph_solve_path(s, {}), dss::ArgumentError);
  CHECK_THROWS_AS(dss::graph_solve_path(s, {0.2, 0.3}), dss::ArgumentError);
  Eigen::MatrixXd skew = s;
  skew(0, 1) += 1.0;
  CHECK_THROWS_AS(dss::graph_solve_path(skew, {0.1}), dss::ArgumentError);
}

TEST_CASE("covariance posterior concentrates on the truth and averages its draws") {
  const int n = 5000, p = 4;
  std::mt19937_64 gen(19);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd x(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) x(i, j) = nd(gen);
  const dss::CovPosterior post = dss::sample_covariance_posterior(x, 400, {23, 0});
  REQUIRE(post.draws.size() == 400);
  CHECK((post.sigma_bar - Eigen::MatrixXd::Identity(p, p)).cwiseAbs().maxCoeff() < 0.08);

  Eigen::MatrixXd avg = Eigen::MatrixXd::Zero(p, p);
  for (const Eigen::MatrixXd& dr : post.draws) {
    CHECK((dr - dr.transpose()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(Eigen::LLT<Eigen::MatrixXd>(dr).info() == Eigen::Success);
    avg += dr;
  }
  avg /= 400.0;
  CHECK((avg - post.sigma_bar).cwiseAbs().maxCoeff() < 1e-12);

  // the draw average tracks the analytic posterior mean scale / (dof - p - 1)
  Eigen::MatrixXd xc = x;
  for (int j = 0; j < p; ++j) xc.col(j).array() -= x.col(j).mean();
  const Eigen::MatrixXd analytic =
      (Eigen::MatrixXd::Identity(p, p) + xc.transpose() * xc) / (n + 1.0);
  CHECK((post.sigma_bar - analytic).cwiseAbs().maxCoeff() < 0.01);

  const dss::CovPosterior single = dss::sample_covariance_posterior(x, 1, {23, 0});
  CHECK(single.sigma_bar == single.draws[0]);

  const dss::CovPosterior repeat = dss::sample_covariance_posterior(x, 400, {23, 0});
  CHECK(repeat.sigma_bar == post.sigma_bar);
}

TEST_CASE("covariance posterior refuses wide data with an import hint") {
  Eigen::MatrixXd wide = Eigen::MatrixXd::Random(3, 5);
  CHECK_THROWS_AS(dss::sample_covariance_posterior(wide, 10, {1, 0}), dss::ArgumentError);
  try {
    dss::sample_covariance_posterior(wide, 10, {1, 0});
  } catch (const dss::ArgumentError& e) {
    CHECK(std::string(e.what()).find("import") != std::string::npos);
  }
}

TEST_CASE("matrix and edge tables round trip through csv") {
  const Eigen::MatrixXd s = random_covariance(5, 29);
  const std::string mpath = scratch("matrix.csv");
  dss::write_matrix_csv(mpath, s);
  const Eigen::MatrixXd back = dss::read_matrix_csv(mpath);
  CHECK(back == s);
  const dss::CsvTable mt = dss::read_csv(mpath);
  CHECK(mt.header == std::vector<std::string>{"c1", "c2", "c3", "c4", "c5"});

  const std::vector<dss::PrecisionPathEntry> path =
      dss::graph_solve_path(banded_covariance(4, 0.35), {0.05});
  const std::string epath = scratch("edges.csv");
  dss::write_edges_csv(epath, path[0]);
  const dss::CsvTable et = dss::read_csv(epath);
  CHECK(et.header == std::vector<std::string>{"i", "j", "value"});
  REQUIRE(et.rows.size() == path[0].edges.size());
  for (std::size_t r = 0; r < et.rows.size(); ++r) {
    const int i = static_cast<int>(dss::parse_number(et.rows[r][0], r, 0));
    const int j = static_cast<int>(dss::parse_number(et.rows[r][1], r, 1));
    CHECK(i == path[0].edges[r].first + 1);
    CHECK(j == path[0].edges[r].second + 1);
    CHECK(i < j);
    CHECK(dss::parse_number(et.rows[r][2], r, 2) ==
          path[0].Gamma(path[0].edges[r].first, path[0].edges[r].second));
  }
}
