#include "dss/dsscore.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>

#include "dss/csv.hpp"
#include "dss/errors.hpp"

namespace dss {

namespace {

constexpr double kWeightFloor = 1e-10;

void check_dims(const Eigen::VectorXd& beta_bar, const PredictionDesign& design) {
  if (design.rows() < 1) throw ArgumentError("prediction design has no rows");
  if (design.cols() != beta_bar.size())
    throw ArgumentError("design column count does not match coefficient length");
  if (!beta_bar.allFinite() || !design.Xtilde.allFinite())
    throw ArgumentError("non-finite inputs to path solver");
}

Eigen::VectorXd embed(const std::vector<int>& idx, const Eigen::VectorXd& sub, int p) {
  Eigen::VectorXd full = Eigen::VectorXd::Zero(p);
  for (std::size_t i = 0; i < idx.size(); ++i) full[idx[i]] = sub[static_cast<Eigen::Index>(i)];
  return full;
}

}  // namespace

LossParts dss_loss(const Eigen::VectorXd& gamma, const Eigen::VectorXd& beta_bar,
                   const PredictionDesign& design, double lambda) {
  check_dims(beta_bar, design);
  if (gamma.size() != beta_bar.size()) throw ArgumentError("gamma length mismatch");
  LossParts parts;
  parts.lambda = lambda;
  parts.card = static_cast<double>((gamma.array() != 0.0).count());
  parts.fit = (design.Xtilde * (beta_bar - gamma)).squaredNorm() / design.rows();
  return parts;
}

namespace {
constexpr int kHomotopyMaxKept = 500;
}

SolutionPath solve_path(const Eigen::VectorXd& beta_bar, const PredictionDesign& design,
                        const Eigen::VectorXd& weights) {
  check_dims(beta_bar, design);
  if (weights.size() != beta_bar.size())
    throw ArgumentError("weights length does not match coefficient length");
  if (!weights.allFinite()) throw ArgumentError("non-finite weights");
  const int p = static_cast<int>(beta_bar.size());
  const double nn = design.rows();

  std::vector<int> kept;
  for (int j = 0; j < p; ++j)
    if (std::abs(weights[j]) >= kWeightFloor) kept.push_back(j);
  const int m = static_cast<int>(kept.size());

  SolutionPath path;
  path.p = p;
  if (m == 0) {
    path.entries.push_back({0.0, Eigen::VectorXd::Zero(p), {}, 0});
    return path;
  }
  if (design.rows() < m)
    throw ArgumentError(
        "prediction design has fewer rows than active coefficients; augment the design "
        "with additional prediction points");
  if (m > kHomotopyMaxKept) return solve_path_cd(beta_bar, design, weights, {});

  Eigen::MatrixXd xk(design.rows(), m);
  Eigen::VectorXd v(m);
  for (int i = 0; i < m; ++i) {
    xk.col(i) = design.Xtilde.col(kept[static_cast<std::size_t>(i)]);
    v[i] = 1.0 / std::abs(weights[kept[static_cast<std::size_t>(i)]]);
  }
  const Eigen::VectorXd ytil = design.Xtilde * beta_bar;
  const Eigen::MatrixXd gram = xk.transpose() * xk;
  const Eigen::VectorXd c0 = xk.transpose() * ytil;

  // first breakpoint: largest lambda with any |correlation| at its bound
  double lam_max = 0.0;
  int j_first = 0;
  for (int j = 0; j < m; ++j) {
    const double cand = (2.0 / nn) * std::abs(c0[j]) / v[j];
    if (cand > lam_max) {
      lam_max = cand;
      j_first = j;
    }
  }
  if (lam_max <= 0.0) {
    path.entries.push_back({0.0, Eigen::VectorXd::Zero(p), {}, 0});
    return path;
  }

  auto record = [&](double lambda, const std::vector<int>& active_sub,
                    const Eigen::VectorXd& gamma_sub) {
    std::vector<int> sup;
    sup.reserve(active_sub.size());
    for (int a : active_sub) sup.push_back(kept[static_cast<std::size_t>(a)]);
    std::sort(sup.begin(), sup.end());
    Eigen::VectorXd full = Eigen::VectorXd::Zero(p);
    for (std::size_t i = 0; i < active_sub.size(); ++i)
      full[kept[static_cast<std::size_t>(active_sub[i])]] = gamma_sub[static_cast<Eigen::Index>(i)];
    path.entries.push_back({lambda, std::move(full), std::move(sup),
                            static_cast<int>(active_sub.size())});
  };

  path.entries.push_back({2.0 * lam_max, Eigen::VectorXd::Zero(p), {}, 0});
  std::vector<int> active{j_first};
  std::vector<double> sign{c0[j_first] > 0.0 ? 1.0 : -1.0};
  record(lam_max, active, Eigen::VectorXd::Zero(1));

  double lam_cur = lam_max;
  const double guard = 1.0 - 1e-10;
  const int max_events = 20 * m * m + 100;
  for (int event = 0; event < max_events; ++event) {
    const int k = static_cast<int>(active.size());
    Eigen::MatrixXd ga(k, k);
    Eigen::VectorXd ca(k), va_s(k);
    for (int i = 0; i < k; ++i) {
      ca[i] = c0[active[static_cast<std::size_t>(i)]];
      va_s[i] = v[active[static_cast<std::size_t>(i)]] * sign[static_cast<std::size_t>(i)];
      for (int j = 0; j < k; ++j)
        ga(i, j) = gram(active[static_cast<std::size_t>(i)], active[static_cast<std::size_t>(j)]);
    }
    Eigen::LLT<Eigen::MatrixXd> llt(ga);
    if (llt.info() != Eigen::Success)
      throw NumericError("path solver: singular active-set Gram matrix");
    const Eigen::VectorXd gols = llt.solve(ca);
    const Eigen::VectorXd dir = llt.solve(va_s);

    // active coefficients: gamma_i(lambda) = gols_i - (n lambda / 2) dir_i
    double lam_next = 0.0;
    int hit = -1;      // kept-index entering
    int drop = -1;     // position in active dropping
    double hit_sign = 0.0;
    for (int i = 0; i < k; ++i) {
      if (dir[i] == 0.0) continue;
      const double lam = 2.0 * gols[i] / (nn * dir[i]);
      if (lam > lam_next && lam < lam_cur * guard) {
        lam_next = lam;
        drop = i;
        hit = -1;
      }
    }
    std::vector<char> is_active(static_cast<std::size_t>(m), 0);
    for (int a : active) is_active[static_cast<std::size_t>(a)] = 1;
    for (int j = 0; j < m; ++j) {
      if (is_active[static_cast<std::size_t>(j)]) continue;
      double gj_go = 0.0, gj_d = 0.0;
      for (int i = 0; i < k; ++i) {
        gj_go += gram(j, active[static_cast<std::size_t>(i)]) * gols[i];
        gj_d += gram(j, active[static_cast<std::size_t>(i)]) * dir[i];
      }
      const double aj = (2.0 / nn) * (c0[j] - gj_go);
      const double bj = gj_d;
      for (double side : {1.0, -1.0}) {
        const double denom = side * v[j] - bj;
        if (denom == 0.0) continue;
        const double lam = aj / denom;
        if (lam > lam_next && lam < lam_cur * guard) {
          lam_next = lam;
          hit = j;
          drop = -1;
          hit_sign = side;
        }
      }
    }

    if (lam_next <= 0.0) {
      // no further events: the path ends at lambda = 0 with the unpenalized fit
      if (k < m) {
        // remaining inactive coordinates join at lambda ~ 0 numerically; solve
        // the full kept system directly
        Eigen::LLT<Eigen::MatrixXd> full_llt(gram);
        if (full_llt.info() != Eigen::Success)
          throw NumericError("path solver: singular kept-set Gram matrix");
        std::vector<int> all(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) all[static_cast<std::size_t>(i)] = i;
        record(0.0, all, full_llt.solve(c0));
      } else {
        std::vector<int> all = active;
        record(0.0, all, gols);
      }
      return path;
    }

    Eigen::VectorXd gam = gols - (nn * lam_next / 2.0) * dir;
    if (drop >= 0) {
      gam[drop] = 0.0;
      std::vector<int> new_active;
      std::vector<double> new_sign;
      Eigen::VectorXd new_gam(k - 1);
      int w = 0;
      for (int i = 0; i < k; ++i) {
        if (i == drop) continue;
        new_active.push_back(active[static_cast<std::size_t>(i)]);
        new_sign.push_back(sign[static_cast<std::size_t>(i)]);
        new_gam[w++] = gam[i];
      }
      active = std::move(new_active);
      sign = std::move(new_sign);
      record(lam_next, active, new_gam);
    } else {
      std::vector<int> rec_active = active;
      rec_active.push_back(hit);
      Eigen::VectorXd rec_gam(k + 1);
      rec_gam.head(k) = gam;
      rec_gam[k] = 0.0;
      record(lam_next, rec_active, rec_gam);
      active.push_back(hit);
      sign.push_back(hit_sign);
    }
    lam_cur = lam_next;
  }
  throw SolverError("path solver exceeded the event budget");
}

SolutionPath solve_path_cd(const Eigen::VectorXd& beta_bar, const PredictionDesign& design,
                           const Eigen::VectorXd& weights, const std::vector<double>& grid) {
  check_dims(beta_bar, design);
  if (weights.size() != beta_bar.size())
    throw ArgumentError("weights length does not match coefficient length");
  const int p = static_cast<int>(beta_bar.size());
  const double nn = design.rows();

  std::vector<int> kept;
  for (int j = 0; j < p; ++j)
    if (std::abs(weights[j]) >= kWeightFloor) kept.push_back(j);
  const int m = static_cast<int>(kept.size());

  SolutionPath path;
  path.p = p;
  if (m == 0) {
    path.entries.push_back({0.0, Eigen::VectorXd::Zero(p), {}, 0});
    return path;
  }
  if (design.rows() < m)
    throw ArgumentError(
        "prediction design has fewer rows than active coefficients; augment the design "
        "with additional prediction points");

  Eigen::MatrixXd xk(design.rows(), m);
  Eigen::VectorXd v(m);
  for (int i = 0; i < m; ++i) {
    xk.col(i) = design.Xtilde.col(kept[static_cast<std::size_t>(i)]);
    v[i] = 1.0 / std::abs(weights[kept[static_cast<std::size_t>(i)]]);
  }
  const Eigen::VectorXd ytil = design.Xtilde * beta_bar;
  const Eigen::MatrixXd gram = xk.transpose() * xk;
  const Eigen::VectorXd c0 = xk.transpose() * ytil;

  double lam_max = 0.0;
  for (int j = 0; j < m; ++j)
    lam_max = std::max(lam_max, (2.0 / nn) * std::abs(c0[j]) / v[j]);
  if (lam_max <= 0.0) {
    path.entries.push_back({0.0, Eigen::VectorXd::Zero(p), {}, 0});
    return path;
  }

  std::vector<double> lams = grid;
  if (lams.empty()) {
    const int points = 100;
    for (int i = 0; i < points; ++i)
      lams.push_back(lam_max * std::pow(1e-6, static_cast<double>(i) / (points - 1)));
    lams.push_back(0.0);
  }
  std::sort(lams.begin(), lams.end(), std::greater<double>());
  lams.erase(std::unique(lams.begin(), lams.end()), lams.end());
  for (double l : lams)
    if (!(l >= 0.0) || !std::isfinite(l)) throw ArgumentError("grid values must be finite and >= 0");

  Eigen::VectorXd gam = Eigen::VectorXd::Zero(m);
  for (double lam : lams) {
    if (lam == 0.0) {
      Eigen::LLT<Eigen::MatrixXd> llt(gram);
      if (llt.info() != Eigen::Success)
        throw NumericError("grid path: singular kept-set Gram matrix");
      gam = llt.solve(c0);
    } else {
      const int max_sweeps = 100000;
      int sweep = 0;
      for (; sweep < max_sweeps; ++sweep) {
        for (int j = 0; j < m; ++j) {
          const double rj = c0[j] - gram.row(j).dot(gam) + gram(j, j) * gam[j];
          const double th = nn * lam * v[j] / 2.0;
          const double up = std::abs(rj) <= th ? 0.0 : (rj > 0.0 ? rj - th : rj + th) / gram(j, j);
          gam[j] = up;
        }
        // KKT residual on the quadratic form
        double worst = 0.0;
        for (int j = 0; j < m; ++j) {
          const double corr = (2.0 / nn) * (c0[j] - gram.row(j).dot(gam));
          if (gam[j] != 0.0)
            worst = std::max(worst, std::abs(corr - (gam[j] > 0.0 ? 1.0 : -1.0) * lam * v[j]));
          else
            worst = std::max(worst, std::abs(corr) - lam * v[j]);
        }
        if (worst <= 1e-9 * std::max(1.0, lam_max)) break;
      }
      if (sweep == max_sweeps)
        throw SolverError("grid path: coordinate descent did not converge at lambda=" +
                          std::to_string(lam));
    }
    PathEntry e;
    e.lambda = lam;
    e.gamma = Eigen::VectorXd::Zero(p);
    for (int i = 0; i < m; ++i) e.gamma[kept[static_cast<std::size_t>(i)]] = gam[i];
    for (int j = 0; j < p; ++j)
      if (e.gamma[j] != 0.0) e.support.push_back(j);
    e.cardinality = static_cast<int>(e.support.size());
    path.entries.push_back(std::move(e));
  }
  return path;
}

Eigen::VectorXd path_gamma_at(const SolutionPath& path, double lambda) {
  if (path.entries.empty()) throw ArgumentError("empty solution path");
  if (lambda >= path.entries.front().lambda) return Eigen::VectorXd::Zero(path.p);
  for (std::size_t i = 1; i < path.entries.size(); ++i) {
    const auto& hi = path.entries[i - 1];
    const auto& lo = path.entries[i];
    if (lambda <= hi.lambda && lambda >= lo.lambda) {
      if (hi.lambda == lo.lambda) return lo.gamma;
      const double t = (hi.lambda - lambda) / (hi.lambda - lo.lambda);
      return hi.gamma + t * (lo.gamma - hi.gamma);
    }
  }
  return path.entries.back().gamma;
}

double path_kkt_residual(const SolutionPath& path, const Eigen::VectorXd& beta_bar,
                         const PredictionDesign& design, const Eigen::VectorXd& weights) {
  check_dims(beta_bar, design);
  const double nn = design.rows();
  const Eigen::VectorXd ytil = design.Xtilde * beta_bar;
  double worst = 0.0;
  for (const auto& e : path.entries) {
    const Eigen::VectorXd corr =
        (2.0 / nn) * (design.Xtilde.transpose() * (ytil - design.Xtilde * e.gamma));
    for (int j = 0; j < static_cast<int>(beta_bar.size()); ++j) {
      const double w = std::abs(weights[j]);
      if (w < kWeightFloor) continue;  // excluded coordinate, infinite penalty
      const double bound = e.lambda / w;
      if (e.gamma[j] != 0.0) {
        const double s = e.gamma[j] > 0.0 ? 1.0 : -1.0;
        worst = std::max(worst, std::abs(corr[j] - s * bound));
      } else {
        worst = std::max(worst, std::abs(corr[j]) - bound);
      }
    }
  }
  return worst;
}

L0Result exact_l0(const Eigen::VectorXd& beta_bar, const PredictionDesign& design, int k) {
  check_dims(beta_bar, design);
  const int p = static_cast<int>(beta_bar.size());
  if (p > 20) throw BudgetError("exact_l0 supports p <= 20");
  if (k < 0 || k > p) throw ArgumentError("cardinality out of range");
  const Eigen::VectorXd ytil = design.Xtilde * beta_bar;
  const double nn = design.rows();

  L0Result best;
  best.fit = std::numeric_limits<double>::infinity();
  if (k == 0) {
    best.support = {};
    best.gamma = Eigen::VectorXd::Zero(p);
    best.fit = ytil.squaredNorm() / nn;
    return best;
  }

  std::vector<int> comb(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) comb[static_cast<std::size_t>(i)] = i;
  Eigen::MatrixXd xs(design.rows(), k);
  while (true) {
    for (int i = 0; i < k; ++i) xs.col(i) = design.Xtilde.col(comb[static_cast<std::size_t>(i)]);
    const Eigen::MatrixXd gs = xs.transpose() * xs;
    Eigen::LLT<Eigen::MatrixXd> llt(gs);
    if (llt.info() == Eigen::Success) {
      const Eigen::VectorXd cs = xs.transpose() * ytil;
      const Eigen::VectorXd gam = llt.solve(cs);
      const double fit = (ytil - xs * gam).squaredNorm() / nn;
      if (fit < best.fit) {
        best.fit = fit;
        best.support = comb;
        best.gamma = embed(comb, gam, p);
      }
    }
    // next combination in lexicographic order
    int i = k - 1;
    while (i >= 0 && comb[static_cast<std::size_t>(i)] == p - k + i) --i;
    if (i < 0) break;
    ++comb[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j)
      comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
  }
  if (!std::isfinite(best.fit)) throw NumericError("exact_l0: all subsets singular");
  return best;
}

namespace {

// Shared drawwise machinery: A_s, sigma_s, and per-entry G_s.
struct DrawStats {
  Eigen::VectorXd a;       // n^{-1}||X beta(s)||^2
  Eigen::VectorXd sigma2;
  Eigen::MatrixXd fitted;  // design rows × draws
};

DrawStats draw_stats(const PosteriorDraws& draws, const PredictionDesign& design, Exec exec) {
  draws.validate();
  if (design.cols() != draws.p())
    throw ArgumentError("design column count does not match draw dimension");
  DrawStats st;
  const int S = draws.draws();
  const double nn = design.rows();
  st.fitted = design.Xtilde * draws.beta.transpose();
  st.a.resize(S);
  st.sigma2 = draws.sigma2;
  const bool par = exec == Exec::Parallel;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (par)
#endif
  for (int s = 0; s < S; ++s) st.a[s] = st.fitted.col(s).squaredNorm() / nn;
  (void)par;
  return st;
}

Eigen::VectorXd entry_gap(const DrawStats& st, const PathEntry& entry,
                          const PredictionDesign& design, bool full_support, Exec exec) {
  const int S = static_cast<int>(st.a.size());
  Eigen::VectorXd g = Eigen::VectorXd::Zero(S);
  if (full_support) return g;
  const double nn = design.rows();
  const Eigen::VectorXd fit_gamma = design.Xtilde * entry.gamma;
  const bool par = exec == Exec::Parallel;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (par)
#endif
  for (int s = 0; s < S; ++s) g[s] = (st.fitted.col(s) - fit_gamma).squaredNorm() / nn;
  (void)par;
  return g;
}

}  // namespace

Eigen::VectorXd rho_draws(const PathEntry& entry, const PosteriorDraws& draws,
                          const PredictionDesign& design, Exec exec) {
  const DrawStats st = draw_stats(draws, design, exec);
  const Eigen::VectorXd g =
      entry_gap(st, entry, design, entry.cardinality == design.cols(), exec);
  Eigen::VectorXd rho(st.a.size());
  for (Eigen::Index s = 0; s < rho.size(); ++s) {
    const double denom = st.a[s] + st.sigma2[s] + g[s];
    rho[s] = denom > 0.0 ? st.a[s] / denom : 0.0;
  }
  return rho;
}

Eigen::VectorXd psi_draws(const PathEntry& entry, const PosteriorDraws& draws,
                          const PredictionDesign& design, Exec exec) {
  const DrawStats st = draw_stats(draws, design, exec);
  const Eigen::VectorXd g =
      entry_gap(st, entry, design, entry.cardinality == design.cols(), exec);
  Eigen::VectorXd psi(st.a.size());
  for (Eigen::Index s = 0; s < psi.size(); ++s)
    psi[s] = std::sqrt(g[s] + st.sigma2[s]) - std::sqrt(st.sigma2[s]);
  return psi;
}

SparsitySummary summarize(const SolutionPath& path, const PosteriorDraws& draws,
                          const PredictionDesign& design, double level, Exec exec) {
  if (draws.draws() < 100)
    throw ArgumentError("summaries need at least 100 draws for stable interval quantiles");
  if (!(level > 0.0 && level < 1.0)) throw ArgumentError("interval level must be in (0,1)");
  if (path.entries.empty()) throw ArgumentError("empty solution path");

  const DrawStats st = draw_stats(draws, design, exec);
  const int S = static_cast<int>(st.a.size());
  Eigen::VectorXd rho0(S);
  for (int s = 0; s < S; ++s) rho0[s] = st.a[s] / (st.a[s] + st.sigma2[s]);

  SparsitySummary out;
  out.level = level;
  out.benchmark = chunked_mean(rho0);
  const double qlo = 0.5 * (1.0 - level);
  const double qhi = 1.0 - qlo;

  std::vector<char> seen(static_cast<std::size_t>(path.p) + 1, 0);
  for (const auto& e : path.entries) {
    if (seen[static_cast<std::size_t>(e.cardinality)]) continue;
    seen[static_cast<std::size_t>(e.cardinality)] = 1;
    const bool full = e.cardinality == path.p;
    const Eigen::VectorXd g = entry_gap(st, e, design, full, exec);
    Eigen::VectorXd rho(S), psi(S);
    for (int s = 0; s < S; ++s) {
      const double denom = st.a[s] + st.sigma2[s] + g[s];
      rho[s] = denom > 0.0 ? st.a[s] / denom : 0.0;
      psi[s] = std::sqrt(g[s] + st.sigma2[s]) - std::sqrt(st.sigma2[s]);
    }
    SummaryRow row;
    row.cardinality = e.cardinality;
    row.lambda = e.lambda;
    row.rho_mean = chunked_mean(rho);
    row.rho_lo = quantile(rho, qlo);
    row.rho_hi = quantile(rho, qhi);
    row.psi_mean = chunked_mean(psi);
    row.psi_lo = quantile(psi, qlo);
    row.psi_hi = quantile(psi, qhi);
    row.support = e.support;
    row.gamma = e.gamma;
    out.rows.push_back(std::move(row));
  }
  std::sort(out.rows.begin(), out.rows.end(),
            [](const SummaryRow& a, const SummaryRow& b) { return a.cardinality < b.cardinality; });
  return out;
}

Selection select_heuristic(const SparsitySummary& summary) {
  if (summary.rows.empty()) throw ArgumentError("empty sparsity summary");
  for (const auto& row : summary.rows) {
    if (row.rho_lo <= summary.benchmark && summary.benchmark <= row.rho_hi)
      return {row.cardinality, row.support, row.gamma};
  }
  const auto& full = summary.rows.back();
  return {full.cardinality, full.support, full.gamma};
}

void write_path_csv(const std::string& path, const SolutionPath& sp) {
  CsvTable t;
  t.header = {"lambda", "cardinality"};
  for (int j = 1; j <= sp.p; ++j) t.header.push_back("gamma_" + std::to_string(j));
  for (const auto& e : sp.entries) {
    std::vector<std::string> row{format_double(e.lambda), std::to_string(e.cardinality)};
    for (int j = 0; j < sp.p; ++j) row.push_back(format_double(e.gamma[j]));
    t.rows.push_back(std::move(row));
  }
  write_csv(path, t);
}

SolutionPath read_path_csv(const std::string& path) {
  CsvTable t = read_csv(path);
  if (t.header.size() < 3 || t.header[0] != "lambda" || t.header[1] != "cardinality")
    throw SchemaError(path + ": expected columns lambda, cardinality, gamma_*");
  SolutionPath sp;
  sp.p = static_cast<int>(t.header.size()) - 2;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    PathEntry e;
    e.lambda = parse_number(t.rows[r][0], r + 2, 1);
    e.cardinality = static_cast<int>(parse_number(t.rows[r][1], r + 2, 2));
    e.gamma.resize(sp.p);
    for (int j = 0; j < sp.p; ++j)
      e.gamma[j] = parse_number(t.rows[r][static_cast<std::size_t>(j) + 2], r + 2,
                                static_cast<std::size_t>(j) + 3);
    sp.entries.push_back(std::move(e));
  }
  return sp;
}

void write_summary_csv(const std::string& path, const SparsitySummary& s) {
  CsvTable t;
  t.header = {"cardinality", "rho_mean", "rho_lo", "rho_hi",
              "psi_mean",    "psi_lo",   "psi_hi", "benchmark"};
  for (const auto& row : s.rows) {
    t.rows.push_back({std::to_string(row.cardinality), format_double(row.rho_mean),
                      format_double(row.rho_lo), format_double(row.rho_hi),
                      format_double(row.psi_mean), format_double(row.psi_lo),
                      format_double(row.psi_hi), format_double(s.benchmark)});
  }
  write_csv(path, t);
}

}  // namespace dss
