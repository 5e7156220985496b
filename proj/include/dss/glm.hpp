#pragma once

#include <string>
#include <vector>

#include "dss/dataset.hpp"
#include "dss/draws.hpp"
#include "dss/parallel.hpp"
#include "dss/rng.hpp"

namespace dss {

// Posterior mean success probabilities at the design rows, clamped to
// [1e-8, 1-1e-8] so the logistic objective stays finite.
Eigen::VectorXd clamp_probs(Eigen::VectorXd pi);
Eigen::VectorXd posterior_mean_probs(const PosteriorDraws& draws, const PredictionDesign& design);

// Penalized negative expected log-likelihood
//   lambda*||gamma||_1 + n^{-1} sum_i [log(1+exp(eta_i)) - pi_bar_i * eta_i],
// eta = intercept + X gamma. Identical (to within a constant in the data term)
// to a weighted logistic regression on 2n pseudo-rows: outcome 1 with weight
// pi_bar_i and outcome 0 with weight 1-pi_bar_i.
double logistic_dss_objective(const Eigen::VectorXd& gamma, const PredictionDesign& design,
                              const Eigen::VectorXd& pi_bar, double lambda,
                              double intercept = 0.0);

struct GlmPathEntry {
  double lambda = 0.0;
  double intercept = 0.0;
  Eigen::VectorXd gamma;
  std::vector<int> support;  // nonzero coordinates
  int cardinality = 0;
};

struct GlmPath {
  std::vector<GlmPathEntry> entries;  // lambda strictly decreasing
  int p = 0;
};

// Largest penalty with an all-zero solution (intercept free), then log-spaced
// decay over three decades.
std::vector<double> default_glm_grid(const PredictionDesign& design,
                                     const Eigen::VectorXd& pi_bar, int points = 50);

// Per grid point: iteratively reweighted coordinate descent with an unpenalized
// intercept, warm-started, converged to KKT residual 1e-7 on the true objective.
GlmPath logistic_solve_path(const PredictionDesign& design, const Eigen::VectorXd& pi_bar,
                            const std::vector<double>& grid);

// Drawwise logistic excess error with pi_i(s) = logistic(X_i beta(s)) and
// pi_lam = logistic(intercept + X gamma):
//   psi(s) = sqrt(n^{-1} sum_i [(pi_i-pi_lam_i)^2 + pi_i(1-pi_i)])
//          - sqrt(n^{-1} sum_i pi_i(1-pi_i)),
// nonnegative, zero only when the sparse probabilities match drawwise.
Eigen::VectorXd logistic_psi_draws(const GlmPathEntry& entry, const PosteriorDraws& draws,
                                   const PredictionDesign& design, Exec exec = Exec::Parallel);

struct GlmSummaryRow {
  int cardinality = 0;
  double lambda = 0.0;
  double intercept = 0.0;
  double psi_mean = 0.0, psi_lo = 0.0, psi_hi = 0.0;
  std::vector<int> support;
  Eigen::VectorXd gamma;
};

struct GlmSummary {
  std::vector<GlmSummaryRow> rows;  // ascending cardinality, first entry per cardinality
  double level = 0.90;
};

GlmSummary glm_summarize(const GlmPath& path, const PosteriorDraws& draws,
                         const PredictionDesign& design, double level = 0.90,
                         Exec exec = Exec::Parallel);

struct LogisticRwOptions {
  int draws = 5000;
  int burn = 1000;
  int thin = 1;
  double step = 0.1;       // random-walk proposal scale
  double prior_sd = 10.0;  // independent normal prior on coefficients
};

// Random-walk Metropolis over logistic coefficients (no intercept) against 0/1
// outcomes; sigma2 column fixed at 1 so the draws fit the shared schema. A
// self-contained default; imported draw CSVs plug in the same way.
PosteriorDraws sample_logistic_rw(const Eigen::MatrixXd& x, const Eigen::VectorXd& z,
                                  const LogisticRwOptions& opt, const RngConfig& rng_config);

// Path CSV: lambda, cardinality, intercept, gamma_1..gamma_p.
void write_glm_path_csv(const std::string& path, const GlmPath& gp);
// Summary CSV in the shared sparsity-summary schema; the rho and benchmark
// columns are nan (variation-explained is defined for the linear model only).
void write_glm_summary_csv(const std::string& path, const GlmSummary& s);

}  // namespace dss
