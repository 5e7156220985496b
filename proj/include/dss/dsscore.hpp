#pragma once

#include <string>
#include <vector>

#include "dss/dataset.hpp"
#include "dss/draws.hpp"
#include "dss/parallel.hpp"

namespace dss {

struct LossParts {
  double lambda = 0.0;
  double card = 0.0;
  double fit = 0.0;
  double total() const { return lambda * card + fit; }
};

// Sparsification loss: lambda*||gamma||_0 + n^{-1}||X beta_bar - X gamma||^2 over
// the prediction design rows; the posterior-constant terms are dropped.
LossParts dss_loss(const Eigen::VectorXd& gamma, const Eigen::VectorXd& beta_bar,
                   const PredictionDesign& design, double lambda);

struct PathEntry {
  double lambda = 0.0;
  Eigen::VectorXd gamma;
  std::vector<int> support;  // active set: a variable joins here with coefficient 0
  int cardinality = 0;
};

struct SolutionPath {
  std::vector<PathEntry> entries;  // lambda strictly decreasing
  int p = 0;
};

// Exact homotopy path of the weighted-l1 surrogate on the noiseless pseudo
// response X beta_bar: penalty sum_j |gamma_j| / |w_j|. Every lambda where the
// active set changes is a breakpoint entry; the entry's support is the active
// set just after the change (lars step convention, so a size-k support pairs
// with the most-shrunk k-variable solution). Coordinates with |w_j| < 1e-10
// are excluded outright (their penalty diverges).
SolutionPath solve_path(const Eigen::VectorXd& beta_bar, const PredictionDesign& design,
                        const Eigen::VectorXd& weights);

// Grid fallback used instead of the homotopy once the kept support exceeds 500
// coordinates: coordinate descent per grid point, warm-started, converged to the
// same KKT tolerance. Entry cardinality is the nonzero count here (a grid has no
// breakpoint structure to label).
SolutionPath solve_path_cd(const Eigen::VectorXd& beta_bar, const PredictionDesign& design,
                           const Eigen::VectorXd& weights, const std::vector<double>& grid);

// Piecewise-linear evaluation between breakpoints.
Eigen::VectorXd path_gamma_at(const SolutionPath& path, double lambda);

// Max KKT residual over all breakpoints of the weighted-l1 problem.
double path_kkt_residual(const SolutionPath& path, const Eigen::VectorXd& beta_bar,
                         const PredictionDesign& design, const Eigen::VectorXd& weights);

struct L0Result {
  std::vector<int> support;
  Eigen::VectorXd gamma;
  double fit = 0.0;
};

// Best size-k subset for the squared prediction discrepancy, exhaustive over
// C(p, k); gamma is the least-squares refit on the subset.
L0Result exact_l0(const Eigen::VectorXd& beta_bar, const PredictionDesign& design, int k);

// Per-draw rho^2_lambda = A / (A + sigma2 + G), A = n^{-1}||X beta(s)||^2,
// G = n^{-1}||X beta(s) - X gamma||^2. A full-support entry has no
// sparsification gap: G = 0 drawwise and rho^2_lambda reduces to rho^2_0.
Eigen::VectorXd rho_draws(const PathEntry& entry, const PosteriorDraws& draws,
                          const PredictionDesign& design, Exec exec = Exec::Parallel);

// Per-draw psi_lambda = sqrt(G + sigma2) - sigma.
Eigen::VectorXd psi_draws(const PathEntry& entry, const PosteriorDraws& draws,
                          const PredictionDesign& design, Exec exec = Exec::Parallel);

struct SummaryRow {
  int cardinality = 0;
  double lambda = 0.0;
  double rho_mean = 0.0, rho_lo = 0.0, rho_hi = 0.0;
  double psi_mean = 0.0, psi_lo = 0.0, psi_hi = 0.0;
  std::vector<int> support;
  Eigen::VectorXd gamma;
};

struct SparsitySummary {
  std::vector<SummaryRow> rows;  // ascending cardinality, first entry per cardinality
  double benchmark = 0.0;        // E(rho^2_0)
  double level = 0.90;
};

SparsitySummary summarize(const SolutionPath& path, const PosteriorDraws& draws,
                          const PredictionDesign& design, double level = 0.90,
                          Exec exec = Exec::Parallel);

struct Selection {
  int cardinality = 0;
  std::vector<int> support;
  Eigen::VectorXd gamma;
};

// Smallest cardinality whose rho^2_lambda interval contains E(rho^2_0);
// falls back to the largest (full) entry.
Selection select_heuristic(const SparsitySummary& summary);

void write_path_csv(const std::string& path, const SolutionPath& sp);
SolutionPath read_path_csv(const std::string& path);
void write_summary_csv(const std::string& path, const SparsitySummary& s);

}  // namespace dss
