#include "dss/modelspace.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "dss/csv.hpp"
#include "dss/errors.hpp"

namespace dss {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double lbeta(double x, double y) { return std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y); }

double log_choose(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// log BF of a p_model-variable model with coefficient of determination r2
// against the null model, under fixed g.
double log_bf_fixed_g(double g, int k, double r2, int n) {
  if (k == 0) return 0.0;
  return 0.5 * (n - 1 - k) * std::log1p(g) - 0.5 * (n - 1) * std::log1p(g * (1.0 - r2));
}

struct HyperParams {
  double a, b, c, d;
};

HyperParams resolve_hyper(const PriorConfig& prior, int k, int n) {
  HyperParams h{prior.a, prior.b, prior.c, prior.d};
  if (prior.d_by_model) h.d = 0.5 * (n - 5) - 0.5 * k + 0.75;
  if (!(h.a > 0.0) || !(h.b > 0.0) || !(h.c > -1.0) || !(h.d > -1.0) || !(h.a + h.c > 0.0))
    throw ArgumentError("hyper-g hyperparameters out of range (need a>0, b>0, c>-1, d>-1, a+c>0)");
  return h;
}

double log_prior_norm(const HyperParams& h) {
  return -(h.a + h.c) * std::log(h.b) + lbeta(h.d + 1.0, h.a + h.c);
}

// log of the u-substituted integrand, u = g/(1+g).
double log_integrand_u(double u, const HyperParams& h, int k, double r2, int n) {
  const double g = u / (1.0 - u);
  return log_bf_fixed_g(g, k, r2, n) + h.d * std::log(g) -
         (h.a + h.c + h.d + 1.0) * std::log(g + h.b) - 2.0 * std::log1p(-u);
}

// Gauss 7 / Kronrod 15 nodes and weights on [-1, 1].
constexpr double kKronrodX[15] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769, -0.741531185599394,
    -0.586087235467691, -0.405845151377397, -0.207784955007898, 0.0,
    0.207784955007898,  0.405845151377397,  0.586087235467691,  0.741531185599394,
    0.864864423359769,  0.949107912342759,  0.991455371120813};
constexpr double kKronrodW[15] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728,
    0.204432940075298, 0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529};
constexpr double kGaussW[7] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469,
    0.381830050505119, 0.279705391489277, 0.129484966168870};

// Integrates exp(logf(u) - offset) over [0, 1] with adaptive bisection,
// relative tolerance 1e-8. Nodes are strictly interior, so endpoint
// singularities of integrable order are harmless.
template <typename F>
double adaptive_gk(const F& logf, double offset) {
  struct Seg {
    double lo, hi;
  };
  auto eval = [&](double lo, double hi, double* gauss) {
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    double k = 0.0, g = 0.0;
    for (int i = 0; i < 15; ++i) {
      const double u = mid + half * kKronrodX[i];
      const double lf = logf(u);
      const double f = std::isfinite(lf) ? std::exp(lf - offset) : 0.0;
      k += kKronrodW[i] * f;
      if (i % 2 == 1) g += kGaussW[i / 2] * f;
    }
    *gauss = g * half;
    return k * half;
  };

  std::vector<Seg> stack{{0.0, 1.0}};
  double total = 0.0;
  double scale = 0.0;
  {
    double g;
    scale = std::abs(eval(0.0, 1.0, &g));
  }
  int evals = 0;
  while (!stack.empty()) {
    if (++evals > 20000) throw NumericError("hyper-g quadrature failed to converge");
    Seg s = stack.back();
    stack.pop_back();
    double g;
    const double k = eval(s.lo, s.hi, &g);
    const double err = std::abs(k - g);
    if (err <= 1e-8 * std::max(scale, std::abs(k)) || s.hi - s.lo < 1e-14) {
      total += k;
    } else {
      const double mid = 0.5 * (s.lo + s.hi);
      stack.push_back({s.lo, mid});
      stack.push_back({mid, s.hi});
    }
  }
  return total;
}

double hyper_g_log_ml(const PriorConfig& prior, int k, double r2, int n) {
  if (k == 0) return 0.0;
  const HyperParams h = resolve_hyper(prior, k, n);
  auto logf = [&](double u) { return log_integrand_u(u, h, k, r2, n); };
  double offset = kNegInf;
  for (int i = 1; i <= 32; ++i) {
    const double lf = logf(i / 33.0);
    if (std::isfinite(lf)) offset = std::max(offset, lf);
  }
  if (!std::isfinite(offset)) throw NumericError("hyper-g integrand vanished everywhere");
  const double integral = adaptive_gk(logf, offset);
  if (!(integral > 0.0)) throw NumericError("hyper-g integral not positive");
  return std::log(integral) + offset - log_prior_norm(h);
}

double log_model_prior(const PriorConfig& prior, int k, int p) {
  if (prior.model_prior == PriorConfig::ModelPrior::Uniform) return 0.0;
  return -std::log(p + 1.0) - log_choose(p, k);
}

// R^2 of the subset given precomputed Gram pieces; throws on singular designs.
double subset_r2(const Eigen::MatrixXd& gram, const Eigen::VectorXd& xty, double yty,
                 const std::vector<int>& idx) {
  const int k = static_cast<int>(idx.size());
  if (k == 0) return 0.0;
  Eigen::MatrixXd gs(k, k);
  Eigen::VectorXd cs(k);
  for (int i = 0; i < k; ++i) {
    cs[i] = xty[idx[static_cast<std::size_t>(i)]];
    for (int j = 0; j < k; ++j)
      gs(i, j) = gram(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  }
  Eigen::LLT<Eigen::MatrixXd> llt(gs);
  if (llt.info() != Eigen::Success)
    throw NumericError("singular design submatrix in marginal likelihood");
  const double explained = cs.dot(llt.solve(cs));
  return explained / yty;
}

std::vector<int> mask_indices(std::uint64_t mask, int p) {
  std::vector<int> idx;
  for (int j = 0; j < p; ++j)
    if (mask >> j & 1u) idx.push_back(j);
  return idx;
}

double logml_from_r2(const PriorConfig& prior, int k, double r2, int n) {
  if (prior.family == PriorConfig::Family::FixedG) {
    if (!(prior.g > 0.0)) throw ArgumentError("fixed-g prior needs g > 0");
    return log_bf_fixed_g(prior.g, k, r2, n);
  }
  return hyper_g_log_ml(prior, k, r2, n);
}

}  // namespace

ModelId make_model(std::uint64_t phi) {
  return ModelId{phi, std::popcount(phi)};
}

std::string model_bitstring(ModelId m, int p) {
  std::string s(static_cast<std::size_t>(p), '0');
  for (int j = 0; j < p; ++j)
    if (m.phi >> j & 1u) s[static_cast<std::size_t>(j)] = '1';
  return s;
}

PriorConfig preset_fixed_g(double g) {
  PriorConfig c;
  c.family = PriorConfig::Family::FixedG;
  c.g = g;
  return c;
}
PriorConfig preset_cui_george() {
  PriorConfig c;
  c.family = PriorConfig::Family::HyperG;
  c.a = 1.0; c.b = 1.0; c.c = 0.0; c.d = 0.0;
  return c;
}
PriorConfig preset_hyper_g() {
  PriorConfig c = preset_cui_george();
  c.a = 0.5;
  return c;
}
PriorConfig preset_hyper_g_n(double n) {
  PriorConfig c = preset_cui_george();
  c.a = 0.5; c.b = n;
  return c;
}
PriorConfig preset_maruyama_george() {
  PriorConfig c = preset_cui_george();
  c.c = -0.75;
  c.d_by_model = true;
  return c;
}

double log_marginal_likelihood(const Dataset& data, ModelId model, const PriorConfig& prior) {
  const int n = data.n();
  const int p = data.p();
  if (model.cardinality != std::popcount(model.phi))
    throw ArgumentError("model cardinality does not match its indicator bits");
  if (model.cardinality > n - 1)
    throw ArgumentError("model has more coefficients than n-1; marginal likelihood undefined");
  const Eigen::MatrixXd gram = data.X.transpose() * data.X;
  const Eigen::VectorXd xty = data.X.transpose() * data.Y;
  const double yty = data.Y.squaredNorm();
  const double r2 = subset_r2(gram, xty, yty, mask_indices(model.phi, p));
  return logml_from_r2(prior, model.cardinality, r2, n);
}

ModelSpacePosterior enumerate_models(const Dataset& data, const PriorConfig& prior, Exec exec) {
  const int n = data.n();
  const int p = data.p();
  if (p > 25)
    throw ArgumentError("enumeration supports p <= 25 (2^p models); use gibbs_search instead");
  const int max_card = std::min({p, n - 1, prior.budget < 0 ? p : prior.budget});
  const std::int64_t nmodels = std::int64_t{1} << p;

  const Eigen::MatrixXd gram = data.X.transpose() * data.X;
  const Eigen::VectorXd xty = data.X.transpose() * data.Y;
  const double yty = data.Y.squaredNorm();

  std::vector<double> lml(static_cast<std::size_t>(nmodels), kNegInf);
  std::vector<double> lpost(static_cast<std::size_t>(nmodels), kNegInf);
  std::string worker_error;

#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
#endif
  for (std::int64_t m = 0; m < nmodels; ++m) {
    const int k = std::popcount(static_cast<std::uint64_t>(m));
    if (k > max_card) continue;
    try {
      const double r2 = subset_r2(gram, xty, yty, mask_indices(static_cast<std::uint64_t>(m), p));
      const double v = logml_from_r2(prior, k, r2, n);
      lml[static_cast<std::size_t>(m)] = v;
      lpost[static_cast<std::size_t>(m)] = v + log_model_prior(prior, k, p);
    } catch (const Error& e) {
#ifdef _OPENMP
#pragma omp critical
#endif
      worker_error = e.what();
    }
  }
  if (!worker_error.empty()) throw NumericError(worker_error);

  // Sequential normalization in model-index order keeps results identical for
  // any thread count.
  double mx = kNegInf;
  for (double v : lpost) mx = std::max(mx, v);
  if (!std::isfinite(mx)) throw ArgumentError("no admissible models to enumerate");
  double z = 0.0;
  for (double v : lpost) z += std::isfinite(v) ? std::exp(v - mx) : 0.0;

  ModelSpacePosterior out;
  out.exact = true;
  out.p = p;
  out.inclusion = Eigen::VectorXd::Zero(p);
  for (std::int64_t m = 0; m < nmodels; ++m) {
    const double v = lpost[static_cast<std::size_t>(m)];
    if (!std::isfinite(v)) continue;
    const double pr = std::exp(v - mx) / z;
    out.models.push_back(static_cast<std::uint64_t>(m));
    out.log_ml.push_back(lml[static_cast<std::size_t>(m)]);
    out.prob.push_back(pr);
    for (int j = 0; j < p; ++j)
      if (m >> j & 1) out.inclusion[j] += pr;
  }
  return out;
}

ModelSpacePosterior gibbs_search(const Dataset& data, const PriorConfig& prior, int iters,
                                 RngConfig rng_cfg) {
  if (iters < 1000) throw ArgumentError("gibbs_search needs at least 1000 sweeps");
  const int n = data.n();
  const int p = data.p();
  const int max_card = std::min({p, n - 1, prior.budget < 0 ? p : prior.budget});
  Rng rng(rng_cfg);

  const Eigen::MatrixXd gram = data.X.transpose() * data.X;
  const Eigen::VectorXd xty = data.X.transpose() * data.Y;
  const double yty = data.Y.squaredNorm();

  std::unordered_map<std::uint64_t, double> lml_cache, lpost_cache;
  auto lpost = [&](std::uint64_t mask) {
    auto it = lpost_cache.find(mask);
    if (it != lpost_cache.end()) return it->second;
    const int k = std::popcount(mask);
    const double r2 = subset_r2(gram, xty, yty, mask_indices(mask, p));
    const double ml = logml_from_r2(prior, k, r2, n);
    const double v = ml + log_model_prior(prior, k, p);
    lml_cache.emplace(mask, ml);
    lpost_cache.emplace(mask, v);
    return v;
  };

  std::uint64_t phi = 0;
  std::unordered_map<std::uint64_t, std::int64_t> visits;
  Eigen::VectorXd incl = Eigen::VectorXd::Zero(p);
  for (int it = 0; it < iters; ++it) {
    for (int j = 0; j < p; ++j) {
      const std::uint64_t bit = std::uint64_t{1} << j;
      const std::uint64_t on = phi | bit;
      if (std::popcount(on) > max_card) {
        phi &= ~bit;
        continue;
      }
      const double l0 = lpost(phi & ~bit);
      const double l1 = lpost(on);
      const double p1 = 1.0 / (1.0 + std::exp(l0 - l1));
      phi = rng.uniform() < p1 ? on : (phi & ~bit);
    }
    ++visits[phi];
    for (int j = 0; j < p; ++j)
      if (phi >> j & 1u) incl[j] += 1.0;
  }

  ModelSpacePosterior out;
  out.exact = false;
  out.p = p;
  out.inclusion = incl / static_cast<double>(iters);
  std::vector<std::pair<std::uint64_t, std::int64_t>> ranked(visits.begin(), visits.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  for (const auto& [mask, count] : ranked) {
    out.models.push_back(mask);
    out.visits.push_back(count);
    out.prob.push_back(static_cast<double>(count) / static_cast<double>(iters));
    out.log_ml.push_back(lml_cache.at(mask));
  }
  return out;
}

PosteriorDraws bma_draws(const Dataset& data, const ModelSpacePosterior& space,
                         const PriorConfig& prior, int S, RngConfig rng_cfg) {
  if (S < 100) throw ArgumentError("bma_draws needs S >= 100");
  if (space.models.empty()) throw ArgumentError("model-space posterior is empty");
  if (!space.exact) {
    std::int64_t total = 0;
    for (auto v : space.visits) total += v;
    if (total == 0) throw ArgumentError("sampled model space has no visits");
  }
  const int n = data.n();
  const int p = data.p();
  const double yty = data.Y.squaredNorm();
  Rng rng(rng_cfg);

  std::vector<double> cum(space.models.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < space.models.size(); ++i) {
    acc += space.prob[i];
    cum[i] = acc;
  }
  const double cum_total = acc;

  struct ModelCache {
    std::vector<int> idx;
    Eigen::MatrixXd gi_chol;  // lower Cholesky factor of (X_S' X_S)^{-1}
    Eigen::VectorXd bhat;
    double r2 = 0.0;
    std::vector<double> cdf;  // hyper-g: CDF of g on the u grid
  };
  std::unordered_map<std::uint64_t, ModelCache> cache;
  constexpr int kGrid = 4096;

  auto get_cache = [&](std::uint64_t mask) -> ModelCache& {
    auto it = cache.find(mask);
    if (it != cache.end()) return it->second;
    ModelCache mc;
    mc.idx = mask_indices(mask, p);
    const int k = static_cast<int>(mc.idx.size());
    if (k > 0) {
      Eigen::MatrixXd xs(n, k);
      for (int i = 0; i < k; ++i) xs.col(i) = data.X.col(mc.idx[static_cast<std::size_t>(i)]);
      Eigen::MatrixXd gs = xs.transpose() * xs;
      Eigen::LLT<Eigen::MatrixXd> llt(gs);
      if (llt.info() != Eigen::Success)
        throw NumericError("singular design submatrix in bma_draws");
      Eigen::MatrixXd gi = llt.solve(Eigen::MatrixXd::Identity(k, k));
      mc.bhat = llt.solve(xs.transpose() * data.Y);
      mc.r2 = (xs.transpose() * data.Y).dot(mc.bhat) / yty;
      Eigen::LLT<Eigen::MatrixXd> llt_gi(gi);
      if (llt_gi.info() != Eigen::Success)
        throw NumericError("inverse Gram factorization failed in bma_draws");
      mc.gi_chol = llt_gi.matrixL();
      if (prior.family == PriorConfig::Family::HyperG) {
        const HyperParams h = resolve_hyper(prior, k, n);
        std::vector<double> logw(kGrid);
        double mx = kNegInf;
        for (int i = 0; i < kGrid; ++i) {
          const double u = (i + 0.5) / kGrid;
          logw[static_cast<std::size_t>(i)] = log_integrand_u(u, h, k, mc.r2, n);
          mx = std::max(mx, logw[static_cast<std::size_t>(i)]);
        }
        mc.cdf.resize(kGrid);
        double cacc = 0.0;
        for (int i = 0; i < kGrid; ++i) {
          cacc += std::exp(logw[static_cast<std::size_t>(i)] - mx);
          mc.cdf[static_cast<std::size_t>(i)] = cacc;
        }
        for (double& v : mc.cdf) v /= cacc;
      }
    }
    return cache.emplace(mask, std::move(mc)).first->second;
  };

  PosteriorDraws d;
  d.prior = prior.family == PriorConfig::Family::FixedG ? "bma-fixed-g" : "bma-hyper-g";
  d.beta = Eigen::MatrixXd::Zero(S, p);
  d.sigma2.resize(S);
  Eigen::VectorXd z;
  for (int s = 0; s < S; ++s) {
    const double u = rng.uniform() * cum_total;
    const std::size_t mi = static_cast<std::size_t>(
        std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
    const std::uint64_t mask = space.models[std::min(mi, space.models.size() - 1)];
    ModelCache& mc = get_cache(mask);
    const int k = static_cast<int>(mc.idx.size());

    double g = prior.g;
    if (prior.family == PriorConfig::Family::HyperG && k > 0) {
      const double uu = rng.uniform();
      const std::size_t cell = static_cast<std::size_t>(
          std::lower_bound(mc.cdf.begin(), mc.cdf.end(), uu) - mc.cdf.begin());
      const double ug = (std::min(cell, static_cast<std::size_t>(kGrid - 1)) + 0.5) / kGrid;
      g = ug / (1.0 - ug);
    }

    const double shrink = k > 0 ? g / (1.0 + g) : 0.0;
    const double s_q = k > 0 ? yty * (1.0 + g * (1.0 - mc.r2)) / (1.0 + g) : yty;
    const double sig2 = s_q / (2.0 * rng.gamma(0.5 * (n - 1), 1.0));
    d.sigma2[s] = sig2;
    if (k > 0) {
      z.resize(k);
      for (int i = 0; i < k; ++i) z[i] = rng.normal();
      const Eigen::VectorXd bs =
          shrink * mc.bhat + std::sqrt(sig2 * shrink) * (mc.gi_chol * z);
      for (int i = 0; i < k; ++i) d.beta(s, mc.idx[static_cast<std::size_t>(i)]) = bs[i];
    }
  }
  d.validate();
  return d;
}

ModelId extract_hpm(const ModelSpacePosterior& space) {
  if (space.models.empty()) throw ArgumentError("model-space posterior is empty");
  std::size_t best = 0;
  for (std::size_t i = 1; i < space.models.size(); ++i) {
    const double a = space.exact ? space.prob[i] : static_cast<double>(space.visits[i]);
    const double b = space.exact ? space.prob[best] : static_cast<double>(space.visits[best]);
    if (a > b || (a == b && space.models[i] < space.models[best])) best = i;
  }
  return make_model(space.models[best]);
}

ModelId extract_mpm(const ModelSpacePosterior& space) {
  if (space.models.empty()) throw ArgumentError("model-space posterior is empty");
  std::uint64_t phi = 0;
  for (int j = 0; j < space.p; ++j)
    if (space.inclusion[j] > 0.5) phi |= std::uint64_t{1} << j;
  return make_model(phi);
}

void write_models_csv(const std::string& path, const ModelSpacePosterior& space) {
  CsvTable t;
  t.header = space.exact ? std::vector<std::string>{"bitstring", "log_ml", "probability"}
                         : std::vector<std::string>{"bitstring", "log_ml", "count"};
  t.rows.reserve(space.models.size());
  for (std::size_t i = 0; i < space.models.size(); ++i) {
    std::vector<std::string> row{model_bitstring(make_model(space.models[i]), space.p),
                                 format_double(space.log_ml[i])};
    row.push_back(space.exact ? format_double(space.prob[i]) : std::to_string(space.visits[i]));
    t.rows.push_back(std::move(row));
  }
  write_csv(path, t);
}

void write_inclusion_csv(const std::string& path, const ModelSpacePosterior& space,
                         const std::vector<std::string>& names) {
  CsvTable t;
  t.header = {"name", "inclusion"};
  for (int j = 0; j < space.p; ++j) {
    const std::string nm = j < static_cast<int>(names.size())
                               ? names[static_cast<std::size_t>(j)]
                               : "x" + std::to_string(j + 1);
    t.rows.push_back({nm, format_double(space.inclusion[j])});
  }
  write_csv(path, t);
}

}  // namespace dss
