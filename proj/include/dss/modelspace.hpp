#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dss/dataset.hpp"
#include "dss/draws.hpp"
#include "dss/parallel.hpp"
#include "dss/rng.hpp"

namespace dss {

struct ModelId {
  std::uint64_t phi = 0;  // bit j set = predictor j included
  int cardinality = 0;
};

ModelId make_model(std::uint64_t phi);
std::string model_bitstring(ModelId m, int p);

struct PriorConfig {
  enum class Family { FixedG, HyperG };
  enum class ModelPrior { Uniform, BetaBinomial };  // beta-binomial(1,1): q ~ Uniform

  Family family = Family::FixedG;
  double g = 0.0;  // fixed-g value
  // hyper-g density on g: p(g) proportional to g^d (g+b)^{-(a+c+d+1)}
  double a = 1.0, b = 1.0, c = 0.0, d = 0.0;
  bool d_by_model = false;  // d = (n-5)/2 - p_model/2 + 3/4
  ModelPrior model_prior = ModelPrior::BetaBinomial;
  int budget = -1;  // max cardinality M, -1 = unbounded
};

PriorConfig preset_fixed_g(double g);
PriorConfig preset_cui_george();          // a=1,   b=1, c=0, d=0
PriorConfig preset_hyper_g();             // a=1/2, b=1, c=0, d=0
PriorConfig preset_hyper_g_n(double n);   // a=1/2, b=n, c=0, d=0
PriorConfig preset_maruyama_george();     // a=1, b=1, c=-3/4, d per model

struct ModelSpacePosterior {
  bool exact = true;
  int p = 0;
  std::vector<std::uint64_t> models;
  std::vector<double> log_ml;      // log marginal likelihood relative to the null model
  std::vector<double> prob;        // exact: posterior probability; sampled: visit frequency
  std::vector<std::int64_t> visits;  // sampled mode only
  Eigen::VectorXd inclusion;
};

// Log marginal likelihood relative to the null model. Fixed g uses the closed
// (1+g)-power Bayes-factor form in R^2; the hyper-g family integrates it over
// p(g) by adaptive Gauss-Kronrod quadrature after the substitution u = g/(1+g).
double log_marginal_likelihood(const Dataset& data, ModelId model, const PriorConfig& prior);

ModelSpacePosterior enumerate_models(const Dataset& data, const PriorConfig& prior,
                                     Exec exec = Exec::Parallel);

ModelSpacePosterior gibbs_search(const Dataset& data, const PriorConfig& prior, int iters,
                                 RngConfig rng_cfg);

PosteriorDraws bma_draws(const Dataset& data, const ModelSpacePosterior& space,
                         const PriorConfig& prior, int S, RngConfig rng_cfg);

ModelId extract_hpm(const ModelSpacePosterior& space);
ModelId extract_mpm(const ModelSpacePosterior& space);

void write_models_csv(const std::string& path, const ModelSpacePosterior& space);
void write_inclusion_csv(const std::string& path, const ModelSpacePosterior& space,
                         const std::vector<std::string>& names);

}  // namespace dss
