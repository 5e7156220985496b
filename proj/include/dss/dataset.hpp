#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace dss {

struct Standardization {
  Eigen::VectorXd x_center, x_scale;
  double y_center = 0.0, y_scale = 1.0;
  bool applied = false;
};

struct Dataset {
  Eigen::MatrixXd X;  // n×p, standardized unless std_info.applied is false
  Eigen::VectorXd Y;
  std::vector<std::string> names;
  Standardization std_info;

  int n() const { return static_cast<int>(X.rows()); }
  int p() const { return static_cast<int>(X.cols()); }
};

// Column means 0, sample variances 1 (denominator n-1). Constant columns rejected.
Dataset standardize(const Eigen::MatrixXd& raw_x, const Eigen::VectorXd& raw_y,
                    std::vector<std::string> names);

// Inverse of standardize, for round-trip checks.
void unstandardize(const Dataset& data, Eigen::MatrixXd& raw_x, Eigen::VectorXd& raw_y);

// Map coefficients on the standardized scale back to the raw scale.
// Returns the raw-scale slope vector; *intercept gets the raw intercept.
Eigen::VectorXd back_transform(const Dataset& data, const Eigen::VectorXd& coef,
                               double* intercept);

Dataset load_csv(const std::string& path, const std::string& response,
                 const std::vector<std::string>& log_columns = {},
                 bool do_standardize = true);

struct PredictionDesign {
  enum class Source { SameAsTraining, UserSupplied, Augmented };
  Eigen::MatrixXd Xtilde;
  Source provenance = Source::SameAsTraining;

  int rows() const { return static_cast<int>(Xtilde.rows()); }
  int cols() const { return static_cast<int>(Xtilde.cols()); }
};

PredictionDesign training_design(const Dataset& data);

}  // namespace dss
