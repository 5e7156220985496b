#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dss/rng.hpp"

#include <Eigen/Dense>

namespace dss {

struct PrecisionPathEntry {
  double lambda = 0.0;
  Eigen::MatrixXd Gamma;                   // symmetric positive definite
  std::vector<std::pair<int, int>> edges;  // i < j with Gamma(i,j) != 0
};

// Penalized Gaussian negative log-likelihood in the precision matrix:
//   lambda * sum_{i != j} |Gamma_ij| - log det Gamma + tr(sigma_bar * Gamma),
// penalty on off-diagonals only. Non-positive-definite Gamma is a domain error.
double graph_dss_objective(const Eigen::MatrixXd& gamma, const Eigen::MatrixXd& sigma_bar,
                           double lambda);

// 20 log-spaced penalties from max |off-diagonal| of sigma_bar down by two decades.
std::vector<double> default_graph_grid(const Eigen::MatrixXd& sigma_bar, int points = 20);

// Block coordinate descent (each row/column an l1 subproblem on the working
// covariance), warm-started along the decreasing grid, run to duality gap 1e-6.
// The working covariance stays dual feasible throughout, and each block update
// is an exact ascent step, so the recorded per-sweep dual values log det W + p
// are nondecreasing (equivalently the objective decreases); sweep_dual, when
// given, receives them for the final grid point.
std::vector<PrecisionPathEntry> graph_solve_path(const Eigen::MatrixXd& sigma_bar,
                                                 const std::vector<double>& grid,
                                                 std::vector<double>* sweep_dual = nullptr);

struct CovPosterior {
  std::vector<Eigen::MatrixXd> draws;
  Eigen::MatrixXd sigma_bar;  // draw average
};

// Conjugate inverse-Wishart posterior over the covariance of centered rows of x,
// with a weak identity prior scale. Needs n > p; otherwise instructs the caller
// to import a posterior mean covariance instead.
CovPosterior sample_covariance_posterior(const Eigen::MatrixXd& x, int s,
                                         const RngConfig& rng_config);

Eigen::MatrixXd read_matrix_csv(const std::string& path);
void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m);
// Edge list CSV: i, j, value (1-based indices, upper triangle).
void write_edges_csv(const std::string& path, const PrecisionPathEntry& entry);

}  // namespace dss
