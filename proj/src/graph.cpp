#include "dss/graph.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>

#include "dss/csv.hpp"
#include "dss/errors.hpp"

namespace dss {

namespace {

void check_cov(const Eigen::MatrixXd& sigma_bar) {
  if (sigma_bar.rows() != sigma_bar.cols() || sigma_bar.rows() < 1)
    throw ArgumentError("covariance must be square and nonempty");
  if (!sigma_bar.allFinite()) throw ArgumentError("non-finite covariance");
  const double scale = std::max(1.0, sigma_bar.cwiseAbs().maxCoeff());
  if ((sigma_bar - sigma_bar.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw ArgumentError("covariance is not symmetric to 1e-10");
  Eigen::LLT<Eigen::MatrixXd> llt(sigma_bar);
  if (llt.info() != Eigen::Success)
    throw ArgumentError("covariance is not positive definite");
}

double logdet_pd(const Eigen::MatrixXd& m, const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) throw ArgumentError(std::string(what) + " is not positive definite");
  const Eigen::MatrixXd lfac = llt.matrixL();
  double ld = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) ld += 2.0 * std::log(lfac(i, i));
  return ld;
}

double offdiag_l1(const Eigen::MatrixXd& m) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (i != j) acc += std::abs(m(i, j));
  return acc;
}

}  // namespace

double graph_dss_objective(const Eigen::MatrixXd& gamma, const Eigen::MatrixXd& sigma_bar,
                           double lambda) {
  if (gamma.rows() != gamma.cols() || gamma.rows() != sigma_bar.rows() ||
      sigma_bar.rows() != sigma_bar.cols())
    throw ArgumentError("dimension mismatch");
  const double scale = std::max(1.0, gamma.cwiseAbs().maxCoeff());
  if ((gamma - gamma.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw ArgumentError("precision matrix is not symmetric to 1e-10");
  const double sscale = std::max(1.0, sigma_bar.cwiseAbs().maxCoeff());
  if ((sigma_bar - sigma_bar.transpose()).cwiseAbs().maxCoeff() > 1e-10 * sscale)
    throw ArgumentError("covariance is not symmetric to 1e-10");
  const double ld = logdet_pd(gamma, "precision matrix");
  return lambda * offdiag_l1(gamma) - ld + (sigma_bar * gamma).trace();
}

std::vector<double> default_graph_grid(const Eigen::MatrixXd& sigma_bar, int points) {
  check_cov(sigma_bar);
  if (points < 1) throw ArgumentError("grid needs at least 1 point");
  const Eigen::Index p = sigma_bar.rows();
  double lam_max = 0.0;
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = 0; j < p; ++j)
      if (i != j) lam_max = std::max(lam_max, std::abs(sigma_bar(i, j)));
  if (lam_max <= 0.0) return {0.0};
  std::vector<double> grid;
  for (int i = 0; i < points; ++i)
    grid.push_back(lam_max *
                   std::pow(1e-2, points == 1 ? 0.0 : static_cast<double>(i) / (points - 1)));
  return grid;
}

std::vector<PrecisionPathEntry> graph_solve_path(const Eigen::MatrixXd& sigma_bar,
                                                 const std::vector<double>& grid,
                                                 std::vector<double>* sweep_dual) {
  check_cov(sigma_bar);
  if (grid.empty()) throw ArgumentError("empty penalty grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0) || !std::isfinite(grid[i]))
      throw ArgumentError("grid values must be finite and >= 0");
    if (i > 0 && !(grid[i] < grid[i - 1]))
      throw ArgumentError("penalty grid must be strictly decreasing");
  }
  const int p = static_cast<int>(sigma_bar.rows());

  std::vector<PrecisionPathEntry> path;
  Eigen::MatrixXd w = sigma_bar;
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(p, p);  // column j: lasso coefs for block j

  auto assemble = [&]() {
    Eigen::MatrixXd gam(p, p);
    for (int j = 0; j < p; ++j) {
      double quad = 0.0;
      for (int i = 0; i < p; ++i)
        if (i != j) quad += w(i, j) * b(i, j);
      const double gjj = 1.0 / (w(j, j) - quad);
      gam(j, j) = gjj;
      for (int i = 0; i < p; ++i)
        if (i != j) gam(i, j) = -gjj * b(i, j);
    }
    // average the two column-wise estimates of each off-diagonal
    Eigen::MatrixXd sym = 0.5 * (gam + gam.transpose());
    return sym;
  };

  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    const double lam = grid[gi];
    PrecisionPathEntry entry;
    entry.lambda = lam;

    if (lam == 0.0) {
      Eigen::LLT<Eigen::MatrixXd> llt(sigma_bar);
      entry.Gamma = llt.solve(Eigen::MatrixXd::Identity(p, p));
      entry.Gamma = 0.5 * (entry.Gamma + entry.Gamma.transpose());
      w = sigma_bar;
    } else {
      const int max_sweeps = 10000;
      bool converged = false;
      for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        for (int j = 0; j < p; ++j) {
          // lasso on the block: min 0.5 b' W11 b - s12' b + lam ||b||_1
          for (int it = 0; it < 10000; ++it) {
            double delta = 0.0;
            for (int k = 0; k < p; ++k) {
              if (k == j) continue;
              double r = sigma_bar(k, j);
              for (int l = 0; l < p; ++l)
                if (l != j && l != k) r -= w(k, l) * b(l, j);
              const double old = b(k, j);
              const double denom = w(k, k);
              b(k, j) = std::abs(r) <= lam ? 0.0 : (r > 0.0 ? r - lam : r + lam) / denom;
              delta = std::max(delta, std::abs(b(k, j) - old));
            }
            if (delta < 1e-12 * std::max(1.0, sigma_bar.diagonal().maxCoeff())) break;
          }
          for (int i = 0; i < p; ++i) {
            if (i == j) continue;
            double wij = 0.0;
            for (int l = 0; l < p; ++l)
              if (l != j) wij += w(i, l) * b(l, j);
            w(i, j) = wij;
          }
          for (int i = 0; i < p; ++i)
            if (i != j) w(j, i) = w(i, j);
        }
        const double dual = logdet_pd(w, "working covariance") + p;
        if (sweep_dual && gi + 1 == grid.size()) sweep_dual->push_back(dual);
        Eigen::MatrixXd gam = assemble();
        Eigen::LLT<Eigen::MatrixXd> llt(gam);
        if (llt.info() == Eigen::Success) {
          const Eigen::MatrixXd lfac = llt.matrixL();
          double ld = 0.0;
          for (int i = 0; i < p; ++i) ld += 2.0 * std::log(lfac(i, i));
          const double primal = lam * offdiag_l1(gam) - ld + (sigma_bar * gam).trace();
          converged = primal - dual <= 1e-6;
        }
      }
      if (!converged)
        throw SolverError("graph path did not reach the duality-gap target at grid index " +
                          std::to_string(gi));
      entry.Gamma = assemble();
    }

    Eigen::LLT<Eigen::MatrixXd> check(entry.Gamma);
    if (check.info() != Eigen::Success)
      throw SolverError("graph path produced a non-positive-definite precision matrix");
    for (int i = 0; i < p; ++i)
      for (int j = i + 1; j < p; ++j)
        if (entry.Gamma(i, j) != 0.0) entry.edges.emplace_back(i, j);
    path.push_back(std::move(entry));
  }
  return path;
}

CovPosterior sample_covariance_posterior(const Eigen::MatrixXd& x, int s,
                                         const RngConfig& rng_config) {
  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();
  if (p < 1) throw ArgumentError("need at least one column");
  if (s < 1) throw ArgumentError("need at least one draw");
  if (n <= p)
    throw ArgumentError(
        "n <= p: the conjugate covariance posterior needs more rows than columns; "
        "import a posterior mean covariance instead");
  if (!x.allFinite()) throw ArgumentError("non-finite data");

  const Eigen::MatrixXd xc = x.rowwise() - x.colwise().mean();
  const Eigen::MatrixXd psi =
      Eigen::MatrixXd::Identity(p, p) + xc.transpose() * xc;
  const double nu = static_cast<double>(p) + 2.0 + static_cast<double>(n);

  // inverse-Wishart draw: Sigma = (L A A' L')^{-1} with Psi^{-1} = L L'
  Eigen::LLT<Eigen::MatrixXd> psi_llt(psi);
  if (psi_llt.info() != Eigen::Success) throw NumericError("posterior scale not positive definite");
  const Eigen::MatrixXd psi_inv = psi_llt.solve(Eigen::MatrixXd::Identity(p, p));
  Eigen::LLT<Eigen::MatrixXd> vl((psi_inv + psi_inv.transpose()) * 0.5);
  if (vl.info() != Eigen::Success) throw NumericError("posterior scale inverse not positive definite");
  const Eigen::MatrixXd lmat = vl.matrixL();

  Rng rng(rng_config);
  CovPosterior out;
  out.draws.reserve(static_cast<std::size_t>(s));
  Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(p, p);
  for (int d = 0; d < s; ++d) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(p, p);
    for (Eigen::Index i = 0; i < p; ++i) {
      a(i, i) = std::sqrt(rng.chisq(nu - static_cast<double>(i)));
      for (Eigen::Index j = 0; j < i; ++j) a(i, j) = rng.normal();
    }
    const Eigen::MatrixXd m = lmat * a;
    const Eigen::MatrixXd wish = m * m.transpose();
    Eigen::LLT<Eigen::MatrixXd> wllt(wish);
    if (wllt.info() != Eigen::Success) throw NumericError("Wishart draw not positive definite");
    Eigen::MatrixXd sigma = wllt.solve(Eigen::MatrixXd::Identity(p, p));
    sigma = 0.5 * (sigma + sigma.transpose());
    mean += sigma;
    out.draws.push_back(std::move(sigma));
  }
  out.sigma_bar = mean / static_cast<double>(s);
  return out;
}

Eigen::MatrixXd read_matrix_csv(const std::string& path) {
  CsvTable t = read_csv(path);
  const std::size_t p = t.header.size();
  if (t.rows.size() != p)
    throw SchemaError(path + ": expected a square matrix (rows == columns)");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          parse_number(t.rows[i][j], i + 2, j + 1);
  return m;
}

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m) {
  CsvTable t;
  for (Eigen::Index j = 1; j <= m.cols(); ++j) t.header.push_back("c" + std::to_string(j));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<std::string> row;
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(format_double(m(i, j)));
    t.rows.push_back(std::move(row));
  }
  write_csv(path, t);
}

void write_edges_csv(const std::string& path, const PrecisionPathEntry& entry) {
  CsvTable t;
  t.header = {"i", "j", "value"};
  for (const auto& [i, j] : entry.edges)
    t.rows.push_back({std::to_string(i + 1), std::to_string(j + 1),
                      format_double(entry.Gamma(i, j))});
  write_csv(path, t);
}

}  // namespace dss
