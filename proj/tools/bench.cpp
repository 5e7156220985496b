#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#include "dss/dataset.hpp"
#include "dss/draws.hpp"
#include "dss/dsscore.hpp"
#include "dss/modelspace.hpp"
#include "dss/parallel.hpp"
#include "dss/rng.hpp"

namespace {

double time_ms(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

dss::Dataset synth_data(int n, int p, dss::Rng& rng) {
  Eigen::MatrixXd x(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) x(i, j) = rng.normal();
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  for (int j = 0; j < p; j += 4) beta[j] = 1.5 / (1 + j / 4);
  Eigen::VectorXd y = x * beta;
  for (int i = 0; i < n; ++i) y[i] += rng.normal();
  std::vector<std::string> names;
  for (int j = 1; j <= p; ++j) names.push_back("x" + std::to_string(j));
  return dss::standardize(x, y, names);
}

dss::PosteriorDraws synth_draws(const dss::Dataset& data, int s, dss::Rng& rng) {
  dss::PosteriorDraws d;
  d.prior = "synthetic";
  d.beta.resize(s, data.p());
  d.sigma2.resize(s);
  Eigen::LLT<Eigen::MatrixXd> llt(data.X.transpose() * data.X +
                                  Eigen::MatrixXd::Identity(data.p(), data.p()));
  const Eigen::VectorXd center = llt.solve(data.X.transpose() * data.Y);
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < data.p(); ++j) d.beta(i, j) = center[j] + 0.05 * rng.normal();
    d.sigma2[i] = 0.5 + 0.1 * rng.uniform();
  }
  return d;
}

}  // namespace

int main() {
  dss::apply_thread_cap();
  std::printf("workers: %d\n\n", dss::worker_count());
  std::printf("%-28s %12s %12s %9s %7s\n", "kernel", "serial ms", "parallel ms", "speedup",
              "match");

  dss::Rng rng({20240817, 0});
  {
    const dss::Dataset data = synth_data(400, 40, rng);
    const dss::PosteriorDraws draws = synth_draws(data, 20000, rng);
    const dss::PredictionDesign design = dss::training_design(data);
    Eigen::VectorXd beta_bar(data.p());
    for (int j = 0; j < data.p(); ++j) beta_bar[j] = dss::chunked_mean(draws.beta.col(j));
    const dss::SolutionPath path = dss::solve_path(beta_bar, design, beta_bar);

    dss::SparsitySummary serial, parallel;
    const double ts =
        time_ms([&] { serial = dss::summarize(path, draws, design, 0.90, dss::Exec::Serial); });
    const double tp = time_ms(
        [&] { parallel = dss::summarize(path, draws, design, 0.90, dss::Exec::Parallel); });
    bool match = serial.rows.size() == parallel.rows.size() &&
                 serial.benchmark == parallel.benchmark;
    for (std::size_t i = 0; match && i < serial.rows.size(); ++i) {
      match = serial.rows[i].rho_mean == parallel.rows[i].rho_mean &&
              serial.rows[i].rho_lo == parallel.rows[i].rho_lo &&
              serial.rows[i].rho_hi == parallel.rows[i].rho_hi &&
              serial.rows[i].psi_mean == parallel.rows[i].psi_mean;
    }
    std::printf("%-28s %12.1f %12.1f %8.2fx %7s\n", "drawwise summaries", ts, tp, ts / tp,
                match ? "yes" : "NO");
  }
  {
    const dss::Dataset data = synth_data(150, 18, rng);
    const dss::PriorConfig prior = dss::preset_fixed_g(150.0);
    dss::ModelSpacePosterior serial, parallel;
    const double ts =
        time_ms([&] { serial = dss::enumerate_models(data, prior, dss::Exec::Serial); });
    const double tp =
        time_ms([&] { parallel = dss::enumerate_models(data, prior, dss::Exec::Parallel); });
    bool match = serial.models.size() == parallel.models.size();
    for (std::size_t i = 0; match && i < serial.models.size(); ++i)
      match = serial.log_ml[i] == parallel.log_ml[i] && serial.prob[i] == parallel.prob[i];
    for (int j = 0; match && j < data.p(); ++j)
      match = serial.inclusion[j] == parallel.inclusion[j];
    std::printf("%-28s %12.1f %12.1f %8.2fx %7s\n", "model enumeration (2^18)", ts, tp, ts / tp,
                match ? "yes" : "NO");
  }
  return 0;
}
