#include "dss/horseshoe.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <cstdio>

#include "dss/errors.hpp"

namespace dss {

namespace {

constexpr double kScaleLo = 1e-12;
constexpr double kScaleHi = 1e12;

double clamp_scale(double v, bool* clipped) {
  if (v < kScaleLo) {
    *clipped = true;
    return kScaleLo;
  }
  if (v > kScaleHi) {
    *clipped = true;
    return kScaleHi;
  }
  return v;
}

struct ChainOut {
  Eigen::MatrixXd beta;
  Eigen::VectorXd sigma2;
  Eigen::MatrixXd lj2;
  Eigen::VectorXd lg2;
};

ChainOut run_chain(const Dataset& data, const HorseshoeOptions& o, RngConfig cfg) {
  const int n = data.n();
  const int p = data.p();
  Rng rng(cfg);

  const Eigen::MatrixXd xtx = data.X.transpose() * data.X;
  const Eigen::VectorXd xty = data.X.transpose() * data.Y;

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  double sig2 = 1.0;
  Eigen::VectorXd lj2 = Eigen::VectorXd::Ones(p);
  Eigen::VectorXd nu = Eigen::VectorXd::Ones(p);
  double lg2 = 1.0, xi = 1.0;
  bool clipped = false;

  ChainOut out;
  out.beta.resize(o.draws, p);
  out.sigma2.resize(o.draws);
  if (o.keep_scales) {
    out.lj2.resize(o.draws, p);
    out.lg2.resize(o.draws);
  }

  Eigen::MatrixXd prec(p, p);
  Eigen::VectorXd z(p);
  const int total = o.burn + o.draws * o.thin;
  int stored = 0;
  for (int it = 0; it < total; ++it) {
    // beta | rest: N(A^{-1} X'y / sig2, A^{-1})
    prec = xtx / sig2;
    if (o.noise_scaled_global) {
      for (int j = 0; j < p; ++j) prec(j, j) += 1.0 / (sig2 * lg2 * lj2[j]);
    } else {
      for (int j = 0; j < p; ++j) prec(j, j) += 1.0 / (lg2 * lj2[j]);
    }
    Eigen::LLT<Eigen::MatrixXd> llt(prec);
    if (llt.info() != Eigen::Success)
      throw NumericError("horseshoe sampler: precision factorization failed at iteration " +
                         std::to_string(it));
    for (int j = 0; j < p; ++j) z[j] = rng.normal();
    beta = llt.solve(xty / sig2) +
           llt.matrixU().solve(z);

    // sigma2 | rest
    const double rss = (data.Y - data.X * beta).squaredNorm();
    if (o.noise_scaled_global) {
      double quad = 0.0;
      for (int j = 0; j < p; ++j) quad += beta[j] * beta[j] / (lg2 * lj2[j]);
      sig2 = rng.inverse_gamma(0.5 * (n + p), 0.5 * (rss + quad));
    } else {
      sig2 = rng.inverse_gamma(0.5 * n, 0.5 * rss);
    }

    if (!o.frozen_scales) {
      // local scales and auxiliaries
      for (int j = 0; j < p; ++j) {
        const double b2 = o.noise_scaled_global ? beta[j] * beta[j] / sig2 : beta[j] * beta[j];
        lj2[j] = clamp_scale(rng.inverse_gamma(1.0, 1.0 / nu[j] + 0.5 * b2 / lg2), &clipped);
        nu[j] = clamp_scale(rng.inverse_gamma(1.0, 1.0 + 1.0 / lj2[j]), &clipped);
      }
      double quad = 0.0;
      for (int j = 0; j < p; ++j) {
        const double b2 = o.noise_scaled_global ? beta[j] * beta[j] / sig2 : beta[j] * beta[j];
        quad += b2 / lj2[j];
      }
      lg2 = clamp_scale(rng.inverse_gamma(0.5 * (p + 1), 1.0 / xi + 0.5 * quad), &clipped);
      xi = clamp_scale(rng.inverse_gamma(1.0, 1.0 + 1.0 / lg2), &clipped);
    }

    if (!beta.allFinite() || !std::isfinite(sig2))
      throw NumericError("horseshoe sampler diverged at iteration " + std::to_string(it));

    if (it >= o.burn && (it - o.burn) % o.thin == 0 && stored < o.draws) {
      out.beta.row(stored) = beta;
      out.sigma2[stored] = sig2;
      if (o.keep_scales) {
        out.lj2.row(stored) = lj2;
        out.lg2[stored] = lg2;
      }
      ++stored;
    }
  }
  if (clipped) std::fprintf(stderr, "warning: horseshoe scales clamped to [1e-12, 1e12]\n");
  return out;
}

}  // namespace

PosteriorDraws sample_horseshoe(const Dataset& data, const HorseshoeOptions& opts,
                                RngConfig rng_cfg) {
  if (opts.draws < 1 || opts.burn < 0 || opts.thin < 1 || opts.chains < 1)
    throw ArgumentError("invalid sampler settings");
  const int p = data.p();
  PosteriorDraws d;
  d.prior = opts.frozen_scales ? "horseshoe-frozen" : "horseshoe";
  d.burn = opts.burn;
  d.thin = opts.thin;
  d.beta.resize(opts.draws * opts.chains, p);
  d.sigma2.resize(opts.draws * opts.chains);
  if (opts.keep_scales) {
    d.lambda_local.resize(opts.draws * opts.chains, p);
    d.lambda_global.resize(opts.draws * opts.chains);
  }
  for (int c = 0; c < opts.chains; ++c) {
    RngConfig cfg = rng_cfg;
    cfg.stream += static_cast<std::uint64_t>(c);
    ChainOut ch = run_chain(data, opts, cfg);
    d.beta.middleRows(c * opts.draws, opts.draws) = ch.beta;
    d.sigma2.segment(c * opts.draws, opts.draws) = ch.sigma2;
    if (opts.keep_scales) {
      d.lambda_local.middleRows(c * opts.draws, opts.draws) = ch.lj2;
      d.lambda_global.segment(c * opts.draws, opts.draws) = ch.lg2;
    }
  }
  d.validate();
  return d;
}

std::vector<bool> horseshoe_threshold(const PosteriorDraws& draws) {
  if (draws.lambda_local.rows() != draws.beta.rows())
    throw ArgumentError("thresholding requires draws with retained local scales");
  const int p = draws.p();
  std::vector<bool> keep(static_cast<std::size_t>(p));
  for (int j = 0; j < p; ++j) {
    double acc = 0.0;
    for (int s = 0; s < draws.draws(); ++s) {
      const double lj2 = draws.lambda_local(s, j);
      acc += 1.0 - 1.0 / (1.0 + lj2);  // 1 - kappa_j
    }
    keep[static_cast<std::size_t>(j)] = acc / draws.draws() >= 0.5;
  }
  return keep;
}

}  // namespace dss
