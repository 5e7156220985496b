#include "dss/dataset.hpp"

#include <algorithm>
#include <cmath>

#include "dss/csv.hpp"
#include "dss/errors.hpp"

namespace dss {

static void check_finite(const Eigen::MatrixXd& x, const char* what) {
  if (!x.allFinite()) throw ArgumentError(std::string("non-finite entries in ") + what);
}

Dataset standardize(const Eigen::MatrixXd& raw_x, const Eigen::VectorXd& raw_y,
                    std::vector<std::string> names) {
  const auto n = raw_x.rows();
  const auto p = raw_x.cols();
  if (n < 2 || p < 1) throw ArgumentError("need n >= 2 and p >= 1");
  if (raw_y.size() != n) throw ArgumentError("response length does not match design rows");
  check_finite(raw_x, "X");
  check_finite(raw_y, "Y");

  Dataset d;
  d.names = std::move(names);
  d.std_info.x_center.resize(p);
  d.std_info.x_scale.resize(p);
  d.X.resize(n, p);
  const double denom = static_cast<double>(n - 1);
  for (Eigen::Index j = 0; j < p; ++j) {
    const double mu = raw_x.col(j).mean();
    const double sd = std::sqrt((raw_x.col(j).array() - mu).square().sum() / denom);
    if (sd < 1e-13 * (1.0 + std::abs(mu))) {
      const std::string label = (j < static_cast<Eigen::Index>(d.names.size()))
                                    ? d.names[static_cast<std::size_t>(j)]
                                    : std::to_string(j + 1);
      throw DegenerateInputError("constant column: " + label);
    }
    d.std_info.x_center[j] = mu;
    d.std_info.x_scale[j] = sd;
    d.X.col(j) = (raw_x.col(j).array() - mu) / sd;
  }
  const double ymu = raw_y.mean();
  const double ysd = std::sqrt((raw_y.array() - ymu).square().sum() / denom);
  if (ysd < 1e-13 * (1.0 + std::abs(ymu))) throw DegenerateInputError("constant response");
  d.std_info.y_center = ymu;
  d.std_info.y_scale = ysd;
  d.Y = (raw_y.array() - ymu) / ysd;
  d.std_info.applied = true;
  return d;
}

void unstandardize(const Dataset& data, Eigen::MatrixXd& raw_x, Eigen::VectorXd& raw_y) {
  if (!data.std_info.applied) {
    raw_x = data.X;
    raw_y = data.Y;
    return;
  }
  raw_x.resize(data.X.rows(), data.X.cols());
  for (Eigen::Index j = 0; j < data.X.cols(); ++j)
    raw_x.col(j) = data.X.col(j).array() * data.std_info.x_scale[j] + data.std_info.x_center[j];
  raw_y = data.Y.array() * data.std_info.y_scale + data.std_info.y_center;
}

Eigen::VectorXd back_transform(const Dataset& data, const Eigen::VectorXd& coef,
                               double* intercept) {
  Eigen::VectorXd raw = coef;
  double icpt = 0.0;
  if (data.std_info.applied) {
    for (Eigen::Index j = 0; j < coef.size(); ++j)
      raw[j] = coef[j] * data.std_info.y_scale / data.std_info.x_scale[j];
    icpt = data.std_info.y_center;
    for (Eigen::Index j = 0; j < coef.size(); ++j)
      icpt -= raw[j] * data.std_info.x_center[j];
  }
  if (intercept) *intercept = icpt;
  return raw;
}

Dataset load_csv(const std::string& path, const std::string& response,
                 const std::vector<std::string>& log_columns, bool do_standardize) {
  CsvTable t = read_csv(path);
  const int yc = t.col(response);
  if (yc < 0) throw SchemaError(path + ": response column '" + response + "' not found");
  for (const auto& lc : log_columns)
    if (t.col(lc) < 0) throw SchemaError(path + ": log column '" + lc + "' not found");

  const std::size_t n = t.rows.size();
  const std::size_t p = t.header.size() - 1;
  if (n < 2 || p < 1) throw ArgumentError(path + ": need at least 2 rows and 1 predictor");

  Eigen::MatrixXd x(n, p);
  Eigen::VectorXd y(n);
  std::vector<std::string> names;
  std::vector<bool> take_log(t.header.size(), false);
  for (const auto& lc : log_columns) take_log[static_cast<std::size_t>(t.col(lc))] = true;
  for (std::size_t c = 0; c < t.header.size(); ++c)
    if (static_cast<int>(c) != yc) names.push_back(t.header[c]);

  for (std::size_t r = 0; r < n; ++r) {
    std::size_t jx = 0;
    for (std::size_t c = 0; c < t.header.size(); ++c) {
      double v = parse_number(t.rows[r][c], r + 2, c + 1);
      if (take_log[c]) {
        if (v <= 0.0)
          throw ArgumentError(path + ": log directive on non-positive value at row " +
                              std::to_string(r + 2) + ", column " + t.header[c]);
        v = std::log(v);
      }
      if (static_cast<int>(c) == yc) y[static_cast<Eigen::Index>(r)] = v;
      else x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(jx++)) = v;
    }
  }

  if (!do_standardize) {
    check_finite(x, "X");
    check_finite(y, "Y");
    Dataset d;
    d.X = std::move(x);
    d.Y = std::move(y);
    d.names = std::move(names);
    d.std_info.x_center = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p));
    d.std_info.x_scale = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(p));
    return d;
  }
  return standardize(x, y, std::move(names));
}

PredictionDesign training_design(const Dataset& data) {
  PredictionDesign d;
  d.Xtilde = data.X;
  d.provenance = PredictionDesign::Source::SameAsTraining;
  return d;
}

}  // namespace dss
