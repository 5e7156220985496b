#include "dss/draws.hpp"

#include <algorithm>
#include <cmath>

#include "dss/csv.hpp"
#include "dss/errors.hpp"

namespace dss {

void PosteriorDraws::validate() const {
  if (beta.rows() < 1) throw ArgumentError("posterior draws are empty");
  if (sigma2.size() != beta.rows()) throw ArgumentError("sigma2 length mismatch");
  if (!beta.allFinite() || !sigma2.allFinite())
    throw NumericError("non-finite posterior draw");
  if ((sigma2.array() <= 0.0).any()) throw NumericError("non-positive sigma2 draw");
}

void write_draws_csv(const std::string& path, const PosteriorDraws& d) {
  CsvTable t;
  t.header.push_back("sigma2");
  for (int j = 1; j <= d.p(); ++j) t.header.push_back("beta_" + std::to_string(j));
  t.rows.reserve(static_cast<std::size_t>(d.draws()));
  for (int s = 0; s < d.draws(); ++s) {
    std::vector<std::string> row;
    row.reserve(static_cast<std::size_t>(d.p()) + 1);
    row.push_back(format_double(d.sigma2[s]));
    for (int j = 0; j < d.p(); ++j) row.push_back(format_double(d.beta(s, j)));
    t.rows.push_back(std::move(row));
  }
  write_csv(path, t);
}

PosteriorDraws read_draws_csv(const std::string& path) {
  CsvTable t = read_csv(path);
  if (t.header.empty() || t.header[0] != "sigma2")
    throw SchemaError(path + ": expected first column 'sigma2'");
  const int p = static_cast<int>(t.header.size()) - 1;
  const int s = static_cast<int>(t.rows.size());
  if (s < 1 || p < 1) throw SchemaError(path + ": empty draw table");
  PosteriorDraws d;
  d.prior = "imported";
  d.beta.resize(s, p);
  d.sigma2.resize(s);
  for (int r = 0; r < s; ++r) {
    d.sigma2[r] = parse_number(t.rows[static_cast<std::size_t>(r)][0],
                               static_cast<std::size_t>(r) + 2, 1);
    for (int j = 0; j < p; ++j)
      d.beta(r, j) = parse_number(t.rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(j) + 1],
                                  static_cast<std::size_t>(r) + 2, static_cast<std::size_t>(j) + 2);
  }
  d.validate();
  return d;
}

static double ess_one(const Eigen::VectorXd& x) {
  const int n = static_cast<int>(x.size());
  if (n < 4) return static_cast<double>(n);
  const double mu = x.mean();
  Eigen::VectorXd c = x.array() - mu;
  const double c0 = c.squaredNorm() / static_cast<double>(n);
  if (c0 <= 0.0) return static_cast<double>(n);
  auto acov = [&](int t) {
    double s = 0.0;
    for (int i = 0; i + t < n; ++i) s += c[i] * c[i + t];
    return s / static_cast<double>(n);
  };
  // Geyer: sum autocorrelations over pairs while the pair sums stay positive.
  double rho_sum = 0.0;
  for (int t = 1; t + 1 < n; t += 2) {
    const double pair = (acov(t) + acov(t + 1)) / c0;
    if (pair <= 0.0) break;
    rho_sum += pair;
  }
  const double ess = static_cast<double>(n) / (1.0 + 2.0 * rho_sum);
  return std::clamp(ess, 1.0, static_cast<double>(n));
}

Eigen::VectorXd effective_sample_size(const Eigen::MatrixXd& chain) {
  Eigen::VectorXd out(chain.cols());
  for (Eigen::Index j = 0; j < chain.cols(); ++j) out[j] = ess_one(chain.col(j));
  return out;
}

}  // namespace dss
