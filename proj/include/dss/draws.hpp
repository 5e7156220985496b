#pragma once

#include <Eigen/Dense>
#include <string>

namespace dss {

// Joint draws of (β, σ²), the common currency between samplers and summaries.
// Horseshoe runs additionally retain the local/global scales for thresholding.
struct PosteriorDraws {
  Eigen::MatrixXd beta;    // S×p
  Eigen::VectorXd sigma2;  // S
  std::string prior;
  int burn = 0, thin = 1;
  Eigen::MatrixXd lambda_local;   // S×p when retained, else 0×0
  Eigen::VectorXd lambda_global;  // S when retained, else empty

  int draws() const { return static_cast<int>(beta.rows()); }
  int p() const { return static_cast<int>(beta.cols()); }
  void validate() const;
};

void write_draws_csv(const std::string& path, const PosteriorDraws& d);
PosteriorDraws read_draws_csv(const std::string& path);

// Effective sample size per column, initial-positive-sequence estimator.
Eigen::VectorXd effective_sample_size(const Eigen::MatrixXd& chain);

}  // namespace dss
