#include "dss/glm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dss/csv.hpp"
#include "dss/errors.hpp"

namespace dss {

namespace {

constexpr double kProbFloor = 1e-8;

double log1pexp(double x) { return x > 30.0 ? x : std::log1p(std::exp(x)); }

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void check_probs(const Eigen::VectorXd& pi_bar, const PredictionDesign& design) {
  if (pi_bar.size() != static_cast<Eigen::Index>(design.rows()))
    throw ArgumentError("probability vector length does not match design rows");
  for (Eigen::Index i = 0; i < pi_bar.size(); ++i)
    if (!(pi_bar[i] > 0.0 && pi_bar[i] < 1.0))
      throw ArgumentError("probabilities must lie strictly in (0,1); clamp first");
}

}  // namespace

Eigen::VectorXd clamp_probs(Eigen::VectorXd pi) {
  for (Eigen::Index i = 0; i < pi.size(); ++i) {
    if (!std::isfinite(pi[i])) throw ArgumentError("non-finite probability");
    pi[i] = std::min(1.0 - kProbFloor, std::max(kProbFloor, pi[i]));
  }
  return pi;
}

Eigen::VectorXd posterior_mean_probs(const PosteriorDraws& draws, const PredictionDesign& design) {
  draws.validate();
  if (design.cols() != draws.p())
    throw ArgumentError("design column count does not match draw dimension");
  const Eigen::MatrixXd eta = design.Xtilde * draws.beta.transpose();
  Eigen::VectorXd pi(design.rows());
  for (Eigen::Index i = 0; i < pi.size(); ++i) {
    Eigen::VectorXd row(eta.cols());
    for (Eigen::Index s = 0; s < eta.cols(); ++s) row[s] = logistic(eta(i, s));
    pi[i] = chunked_mean(row);
  }
  return clamp_probs(std::move(pi));
}

double logistic_dss_objective(const Eigen::VectorXd& gamma, const PredictionDesign& design,
                              const Eigen::VectorXd& pi_bar, double lambda, double intercept) {
  check_probs(pi_bar, design);
  if (gamma.size() != design.cols()) throw ArgumentError("gamma length mismatch");
  const Eigen::VectorXd eta =
      (design.Xtilde * gamma).array() + intercept;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) acc += log1pexp(eta[i]) - pi_bar[i] * eta[i];
  return lambda * gamma.lpNorm<1>() + acc / design.rows();
}

std::vector<double> default_glm_grid(const PredictionDesign& design,
                                     const Eigen::VectorXd& pi_bar, int points) {
  check_probs(pi_bar, design);
  if (points < 2) throw ArgumentError("grid needs at least 2 points");
  const double nn = design.rows();
  const double pbar = pi_bar.mean();
  const double alpha0 = std::log(pbar / (1.0 - pbar));
  const double p0 = logistic(alpha0);
  double lam_max = 0.0;
  for (Eigen::Index j = 0; j < design.Xtilde.cols(); ++j) {
    double g = 0.0;
    for (Eigen::Index i = 0; i < design.Xtilde.rows(); ++i)
      g += design.Xtilde(i, j) * (p0 - pi_bar[i]);
    lam_max = std::max(lam_max, std::abs(g) / nn);
  }
  if (lam_max <= 0.0) return {0.0};
  std::vector<double> grid;
  for (int i = 0; i < points; ++i)
    grid.push_back(lam_max * std::pow(1e-3, static_cast<double>(i) / (points - 1)));
  // keep the all-zero solution on the path against roundoff at the boundary
  grid.front() = lam_max * (1.0 + 1e-9);
  return grid;
}

GlmPath logistic_solve_path(const PredictionDesign& design, const Eigen::VectorXd& pi_bar,
                            const std::vector<double>& grid) {
  check_probs(pi_bar, design);
  if (grid.empty()) throw ArgumentError("empty penalty grid");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] < grid[i - 1])) throw ArgumentError("penalty grid must be strictly decreasing");

  const int p = static_cast<int>(design.cols());
  const Eigen::Index n = design.Xtilde.rows();
  const double nn = static_cast<double>(n);

  GlmPath path;
  path.p = p;
  double alpha = std::log(pi_bar.mean() / (1.0 - pi_bar.mean()));
  Eigen::VectorXd gam = Eigen::VectorXd::Zero(p);

  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    const double lam = grid[gi];
    const int max_outer = 500;
    bool done = false;
    for (int outer = 0; outer < max_outer && !done; ++outer) {
      Eigen::VectorXd eta = (design.Xtilde * gam).array() + alpha;
      Eigen::VectorXd pr(n), w(n), z(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        pr[i] = logistic(eta[i]);
        w[i] = std::max(pr[i] * (1.0 - pr[i]), 1e-6);
        z[i] = eta[i] - (pr[i] - pi_bar[i]) / w[i];
      }
      // penalized weighted least squares on the quadratic expansion; fit is
      // maintained incrementally so each coordinate costs O(n)
      Eigen::VectorXd fit = design.Xtilde * gam;
      Eigen::VectorXd wx2(p);
      const double wsum = w.sum();
      for (int j = 0; j < p; ++j)
        wx2[j] = (w.array() * design.Xtilde.col(j).array().square()).sum();
      for (int inner = 0; inner < 1000; ++inner) {
        double delta = 0.0;
        {
          const double num = (w.array() * (z - fit).array()).sum();
          const double na = num / wsum;
          delta = std::max(delta, std::abs(na - alpha));
          alpha = na;
        }
        for (int j = 0; j < p; ++j) {
          if (wx2[j] <= 0.0) {
            gam[j] = 0.0;
            continue;
          }
          const double num =
              ((w.array() * design.Xtilde.col(j).array() * (z - fit).array()).sum() -
               alpha * (w.array() * design.Xtilde.col(j).array()).sum() + gam[j] * wx2[j]) /
              nn;
          const double den = wx2[j] / nn;
          const double old = gam[j];
          if (std::abs(num) <= lam) {
            gam[j] = 0.0;
          } else {
            gam[j] = (num > 0.0 ? num - lam : num + lam) / den;
          }
          if (gam[j] != old) fit += (gam[j] - old) * design.Xtilde.col(j);
          delta = std::max(delta, std::abs(gam[j] - old));
        }
        if (delta < 1e-11) break;
      }
      // KKT residual on the true objective
      eta = (design.Xtilde * gam).array() + alpha;
      Eigen::VectorXd grad = Eigen::VectorXd::Zero(p);
      double ga = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double d = logistic(eta[i]) - pi_bar[i];
        ga += d;
        grad += d * design.Xtilde.row(i).transpose();
      }
      grad /= nn;
      ga /= nn;
      double worst = std::abs(ga);
      for (int j = 0; j < p; ++j) {
        if (gam[j] != 0.0)
          worst = std::max(worst, std::abs(grad[j] + (gam[j] > 0.0 ? lam : -lam)));
        else
          worst = std::max(worst, std::abs(grad[j]) - lam);
      }
      done = worst <= 1e-7;
    }
    if (!done)
      throw SolverError("logistic path did not converge at grid index " + std::to_string(gi));

    GlmPathEntry e;
    e.lambda = lam;
    e.intercept = alpha;
    e.gamma = gam;
    for (int j = 0; j < p; ++j)
      if (gam[j] != 0.0) e.support.push_back(j);
    e.cardinality = static_cast<int>(e.support.size());
    path.entries.push_back(std::move(e));
  }
  return path;
}

Eigen::VectorXd logistic_psi_draws(const GlmPathEntry& entry, const PosteriorDraws& draws,
                                   const PredictionDesign& design, Exec exec) {
  draws.validate();
  if (design.cols() != draws.p())
    throw ArgumentError("design column count does not match draw dimension");
  if (entry.gamma.size() != design.cols()) throw ArgumentError("entry dimension mismatch");
  const Eigen::Index n = design.Xtilde.rows();
  const double nn = static_cast<double>(n);
  const int S = draws.draws();

  Eigen::VectorXd pi_lam(n);
  {
    const Eigen::VectorXd eta = (design.Xtilde * entry.gamma).array() + entry.intercept;
    for (Eigen::Index i = 0; i < n; ++i) pi_lam[i] = logistic(eta[i]);
  }
  const Eigen::MatrixXd eta_s = design.Xtilde * draws.beta.transpose();

  Eigen::VectorXd psi(S);
  const bool par = exec == Exec::Parallel;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (par)
#endif
  for (int s = 0; s < S; ++s) {
    double gap = 0.0, base = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double pi = logistic(eta_s(i, s));
      const double d = pi - pi_lam[i];
      gap += d * d + pi * (1.0 - pi);
      base += pi * (1.0 - pi);
    }
    psi[s] = std::sqrt(gap / nn) - std::sqrt(base / nn);
  }
  (void)par;
  return psi;
}

GlmSummary glm_summarize(const GlmPath& path, const PosteriorDraws& draws,
                         const PredictionDesign& design, double level, Exec exec) {
  if (draws.draws() < 100)
    throw ArgumentError("summaries need at least 100 draws for stable interval quantiles");
  if (!(level > 0.0 && level < 1.0)) throw ArgumentError("interval level must be in (0,1)");
  if (path.entries.empty()) throw ArgumentError("empty solution path");

  GlmSummary out;
  out.level = level;
  const double qlo = 0.5 * (1.0 - level);
  const double qhi = 1.0 - qlo;
  std::vector<char> seen(static_cast<std::size_t>(path.p) + 1, 0);
  for (const auto& e : path.entries) {
    if (seen[static_cast<std::size_t>(e.cardinality)]) continue;
    seen[static_cast<std::size_t>(e.cardinality)] = 1;
    const Eigen::VectorXd psi = logistic_psi_draws(e, draws, design, exec);
    GlmSummaryRow row;
    row.cardinality = e.cardinality;
    row.lambda = e.lambda;
    row.intercept = e.intercept;
    row.psi_mean = chunked_mean(psi);
    row.psi_lo = quantile(psi, qlo);
    row.psi_hi = quantile(psi, qhi);
    row.support = e.support;
    row.gamma = e.gamma;
    out.rows.push_back(std::move(row));
  }
  std::sort(out.rows.begin(), out.rows.end(),
            [](const GlmSummaryRow& a, const GlmSummaryRow& b) {
              return a.cardinality < b.cardinality;
            });
  return out;
}

PosteriorDraws sample_logistic_rw(const Eigen::MatrixXd& x, const Eigen::VectorXd& z,
                                  const LogisticRwOptions& opt, const RngConfig& rng_config) {
  const Eigen::Index n = x.rows();
  const int p = static_cast<int>(x.cols());
  if (z.size() != n) throw ArgumentError("outcome length does not match design rows");
  for (Eigen::Index i = 0; i < n; ++i)
    if (z[i] != 0.0 && z[i] != 1.0) throw ArgumentError("outcomes must be 0 or 1");
  if (opt.draws < 1 || opt.burn < 0 || opt.thin < 1) throw ArgumentError("bad sampler settings");
  if (!(opt.step > 0.0) || !(opt.prior_sd > 0.0)) throw ArgumentError("bad sampler settings");

  Rng rng(rng_config);
  auto logpost = [&](const Eigen::VectorXd& b) {
    const Eigen::VectorXd eta = x * b;
    double ll = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) ll += z[i] * eta[i] - log1pexp(eta[i]);
    return ll - b.squaredNorm() / (2.0 * opt.prior_sd * opt.prior_sd);
  };

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  double lp = logpost(beta);
  PosteriorDraws out;
  out.prior = "logistic-rw";
  out.burn = opt.burn;
  out.thin = opt.thin;
  out.beta.resize(opt.draws, p);
  out.sigma2 = Eigen::VectorXd::Ones(opt.draws);

  const long long total = static_cast<long long>(opt.burn) +
                          static_cast<long long>(opt.draws) * opt.thin;
  int kept = 0;
  for (long long it = 0; it < total; ++it) {
    Eigen::VectorXd prop = beta;
    for (int j = 0; j < p; ++j) prop[j] += opt.step * rng.normal();
    const double lp_prop = logpost(prop);
    if (std::log(rng.uniform()) < lp_prop - lp) {
      beta = std::move(prop);
      lp = lp_prop;
    }
    if (it >= opt.burn && (it - opt.burn) % opt.thin == 0 && kept < opt.draws)
      out.beta.row(kept++) = beta.transpose();
  }
  out.validate();
  return out;
}

void write_glm_path_csv(const std::string& path, const GlmPath& gp) {
  CsvTable t;
  t.header = {"lambda", "cardinality", "intercept"};
  for (int j = 1; j <= gp.p; ++j) t.header.push_back("gamma_" + std::to_string(j));
  for (const auto& e : gp.entries) {
    std::vector<std::string> row{format_double(e.lambda), std::to_string(e.cardinality),
                                 format_double(e.intercept)};
    for (int j = 0; j < gp.p; ++j) row.push_back(format_double(e.gamma[j]));
    t.rows.push_back(std::move(row));
  }
  write_csv(path, t);
}

void write_glm_summary_csv(const std::string& path, const GlmSummary& s) {
  CsvTable t;
  t.header = {"cardinality", "rho_mean", "rho_lo", "rho_hi",
              "psi_mean",    "psi_lo",   "psi_hi", "benchmark"};
  const std::string nan = "nan";
  for (const auto& row : s.rows) {
    t.rows.push_back({std::to_string(row.cardinality), nan, nan, nan,
                      format_double(row.psi_mean), format_double(row.psi_lo),
                      format_double(row.psi_hi), nan});
  }
  write_csv(path, t);
}

}  // namespace dss
