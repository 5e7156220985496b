#pragma once

#include <vector>

#include "dss/dataset.hpp"
#include "dss/draws.hpp"
#include "dss/rng.hpp"

namespace dss {

struct HorseshoeOptions {
  int draws = 5000;
  int burn = 1000;
  int thin = 1;
  int chains = 1;
  // Global scale prior: false = C+(0,1), true = C+(0,sigma^2) (coefficient prior
  // variance multiplied by sigma^2, fully conjugate).
  bool noise_scaled_global = false;
  // Freeze all scales at 1 (degenerate normal prior), for oracle comparisons.
  bool frozen_scales = false;
  bool keep_scales = true;
};

// Gibbs sampler via the inverse-gamma auxiliary representation of half-Cauchy
// scales; sigma^2 carries the improper 1/sigma^2 prior.
PosteriorDraws sample_horseshoe(const Dataset& data, const HorseshoeOptions& opts,
                                RngConfig rng_cfg);

// Keep variable j iff E(1-kappa_j | Y) >= 1/2 with kappa_j = 1/(1+lambda_j^2),
// i.e. keep the coefficients the posterior shrinks by less than half.
std::vector<bool> horseshoe_threshold(const PosteriorDraws& draws);

}  // namespace dss
