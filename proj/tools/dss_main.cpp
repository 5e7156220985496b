#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dss/csv.hpp"
#include "dss/dataset.hpp"
#include "dss/draws.hpp"
#include "dss/dsscore.hpp"
#include "dss/errors.hpp"
#include "dss/glm.hpp"
#include "dss/graph.hpp"
#include "dss/horseshoe.hpp"
#include "dss/modelspace.hpp"
#include "dss/parallel.hpp"
#include "dss/svgplot.hpp"
#include "dss/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string join_path(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw dss::ArgumentError("cannot create output directory: " + dir);
}

void require_artifact(const std::string& path, const std::string& producer) {
  if (!fs::exists(path))
    throw dss::PipelineOrderError("missing " + path + "; run `dss " + producer + "` first");
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw dss::ArgumentError("cannot write " + path);
  f << content;
}

json load_manifest(const std::string& dir) {
  const std::string path = join_path(dir, "manifest.json");
  if (!fs::exists(path)) return json::object();
  std::ifstream f(path);
  try {
    return json::parse(f);
  } catch (const json::exception&) {
    return json::object();
  }
}

void save_manifest(const std::string& dir, const json& m) {
  write_text(join_path(dir, "manifest.json"), m.dump(2) + "\n");
}

std::string fmt(double v, const char* spec = "%.4f") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

Eigen::VectorXd posterior_mean_beta(const dss::PosteriorDraws& draws) {
  Eigen::VectorXd m(draws.p());
  for (int j = 0; j < draws.p(); ++j) m[j] = dss::chunked_mean(draws.beta.col(j));
  return m;
}

double refit_r2(const dss::Dataset& data, const std::vector<int>& support) {
  if (support.empty()) return 0.0;
  const int k = static_cast<int>(support.size());
  Eigen::MatrixXd xs(data.n(), k);
  for (int i = 0; i < k; ++i) xs.col(i) = data.X.col(support[static_cast<std::size_t>(i)]);
  Eigen::MatrixXd gram = xs.transpose() * xs;
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) throw dss::NumericError("singular support in refit");
  const Eigen::VectorXd bhat = llt.solve(xs.transpose() * data.Y);
  const double rss = (data.Y - xs * bhat).squaredNorm();
  const double tss = data.Y.squaredNorm();
  return tss > 0.0 ? 1.0 - rss / tss : 0.0;
}

std::vector<std::string> support_names(const std::vector<int>& support,
                                       const std::vector<std::string>& names) {
  std::vector<std::string> out;
  for (int j : support) out.push_back(names[static_cast<std::size_t>(j)]);
  return out;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

// Shared fit/summarize input options.
struct DataOpts {
  std::string data_file;
  std::string response = "y";
  std::vector<std::string> log_columns;
};

void add_data_opts(CLI::App* cmd, DataOpts& o) {
  cmd->add_option("--data", o.data_file, "input CSV")->required();
  cmd->add_option("--response", o.response, "response column name");
  cmd->add_option("--log", o.log_columns, "columns to log-transform on load")->delimiter(',');
}

dss::PredictionDesign build_design(const dss::Dataset& data, const std::string& design_csv) {
  dss::PredictionDesign design = dss::training_design(data);
  if (design_csv.empty()) return design;
  dss::CsvTable t = dss::read_csv(design_csv);
  const int p = data.p();
  std::vector<int> cols;
  for (int j = 0; j < p; ++j) {
    const int c = t.col(data.names[static_cast<std::size_t>(j)]);
    if (c < 0)
      throw dss::SchemaError(design_csv + ": missing predictor column '" +
                             data.names[static_cast<std::size_t>(j)] + "'");
    cols.push_back(c);
  }
  const Eigen::Index extra = static_cast<Eigen::Index>(t.rows.size());
  Eigen::MatrixXd xraw(extra, p);
  for (Eigen::Index r = 0; r < extra; ++r)
    for (int j = 0; j < p; ++j)
      xraw(r, j) = dss::parse_number(
          t.rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(cols[static_cast<std::size_t>(j)])],
          static_cast<std::size_t>(r) + 2, static_cast<std::size_t>(cols[static_cast<std::size_t>(j)]) + 1);
  Eigen::MatrixXd xstd(extra, p);
  for (int j = 0; j < p; ++j) {
    if (data.std_info.applied)
      xstd.col(j) = (xraw.col(j).array() - data.std_info.x_center[j]) / data.std_info.x_scale[j];
    else
      xstd.col(j) = xraw.col(j);
  }
  Eigen::MatrixXd stacked(data.n() + extra, p);
  stacked.topRows(data.n()) = data.X;
  stacked.bottomRows(extra) = xstd;
  design.Xtilde = std::move(stacked);
  design.provenance = dss::PredictionDesign::Source::Augmented;
  return design;
}

struct SummarizeResult {
  dss::SolutionPath path;
  dss::SparsitySummary summary;
  dss::Selection selection;
  std::string report;
};

SummarizeResult run_summary_pipeline(const dss::Dataset& data, const dss::PosteriorDraws& draws,
                                     const std::string& weights_mode, double level,
                                     const std::string& design_csv) {
  if (draws.p() != data.p())
    throw dss::SchemaError("draw dimension does not match dataset predictors");
  const Eigen::VectorXd beta_bar = posterior_mean_beta(draws);
  Eigen::VectorXd weights;
  if (weights_mode == "posterior-mean") {
    weights = beta_bar;
  } else if (weights_mode == "unit") {
    weights = Eigen::VectorXd::Ones(data.p());
  } else {
    throw dss::ArgumentError("unknown weights mode: " + weights_mode);
  }
  const dss::PredictionDesign design = build_design(data, design_csv);

  SummarizeResult r;
  r.path = dss::solve_path(beta_bar, design, weights);
  r.summary = dss::summarize(r.path, draws, design, level);
  r.selection = dss::select_heuristic(r.summary);

  std::ostringstream rep;
  rep << "sparse posterior summary\n";
  rep << "========================\n\n";
  rep << "draws: " << draws.draws() << " (prior: " << draws.prior << ")\n";
  rep << "design rows: " << design.rows()
      << (design.provenance == dss::PredictionDesign::Source::Augmented ? " (augmented)"
                                                                        : " (training)")
      << "\n";
  rep << "interval level: " << fmt(level * 100.0, "%.0f") << "%\n";
  rep << "benchmark expected variation explained: " << fmt(r.summary.benchmark, "%.4f") << "\n\n";
  rep << "size  rho mean [lo, hi]          psi mean  support\n";
  for (const auto& row : r.summary.rows) {
    char line[160];
    std::snprintf(line, sizeof(line), "%4d  %.4f [%.4f, %.4f]  %.4f", row.cardinality,
                  row.rho_mean, row.rho_lo, row.rho_hi, row.psi_mean);
    rep << line << "    " << join(support_names(row.support, data.names), " ") << "\n";
  }
  rep << "\nselected size: " << r.selection.cardinality << "\n";
  rep << "support: " << join(support_names(r.selection.support, data.names), " ") << "\n";

  std::vector<std::string> std_coefs, raw_coefs;
  double icpt = 0.0;
  const Eigen::VectorXd raw = dss::back_transform(data, r.selection.gamma, &icpt);
  for (int j : r.selection.support) {
    std_coefs.push_back(data.names[static_cast<std::size_t>(j)] + "=" +
                        fmt(r.selection.gamma[j], "%.5f"));
    raw_coefs.push_back(data.names[static_cast<std::size_t>(j)] + "=" + fmt(raw[j], "%.6g"));
  }
  rep << "path coefficients (standardized): " << join(std_coefs, " ") << "\n";
  rep << "path coefficients (raw scale): intercept=" << fmt(icpt, "%.6g") << " "
      << join(raw_coefs, " ") << "\n";
  rep << "refit R^2 on support: " << fmt(100.0 * refit_r2(data, r.selection.support), "%.2f")
      << "%\n";
  r.report = rep.str();
  return r;
}

json names_json(const std::vector<std::string>& names) {
  json arr = json::array();
  for (const auto& n : names) arr.push_back(n);
  return arr;
}

std::vector<std::string> manifest_names(const json& manifest, int p) {
  for (const char* key : {"summarize", "fit", "glm-summarize"}) {
    if (manifest.contains(key) && manifest[key].contains("names")) {
      std::vector<std::string> names;
      for (const auto& v : manifest[key]["names"]) names.push_back(v.get<std::string>());
      if (static_cast<int>(names.size()) == p) return names;
    }
  }
  std::vector<std::string> names;
  for (int j = 1; j <= p; ++j) names.push_back("x" + std::to_string(j));
  return names;
}

}  // namespace

int main(int argc, char** argv) {
  dss::apply_thread_cap();

  CLI::App app{"Sparse decision summaries of Bayesian regression posteriors"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("dss ") + dss::kVersion);

  // fit
  auto* fit = app.add_subcommand("fit", "sample a posterior and persist the draws");
  DataOpts fit_data;
  add_data_opts(fit, fit_data);
  std::string fit_out, fit_prior;
  int fit_draws = 5000, fit_burn = 1000, fit_thin = 1, fit_chains = 1;
  std::uint64_t fit_seed = 0, fit_stream = 0;
  bool fit_noise_scaled = false, fit_frozen = false, fit_enumerate = false;
  std::string fit_g = "n", fit_hyper, fit_model_prior = "beta-binomial";
  int fit_budget = -1, fit_gibbs = 0;
  double fit_ha = 1.0, fit_hb = 1.0, fit_hc = 0.0, fit_hd = 0.0;
  fit->add_option("--out", fit_out, "output directory")->required();
  fit->add_option("--prior", fit_prior, "horseshoe or gprior")
      ->required()
      ->check(CLI::IsMember({"horseshoe", "gprior"}));
  fit->add_option("--draws", fit_draws, "retained posterior draws");
  fit->add_option("--burn", fit_burn, "burn-in sweeps");
  fit->add_option("--thin", fit_thin, "thinning interval");
  fit->add_option("--chains", fit_chains, "independent chains (horseshoe)");
  fit->add_option("--seed", fit_seed, "rng seed");
  fit->add_option("--stream", fit_stream, "rng stream");
  fit->add_flag("--noise-scaled-global", fit_noise_scaled,
                "half-Cauchy global scale proportional to sigma");
  fit->add_flag("--frozen-scales", fit_frozen, "freeze shrinkage scales at 1 (diagnostics)");
  fit->add_option("--g", fit_g, "g value for gprior, or 'n'");
  fit->add_option("--hyper", fit_hyper, "hyper-g preset")
      ->check(CLI::IsMember({"cui-george", "hyper-g", "hyper-g-n", "maruyama-george", "custom"}));
  fit->add_option("--hyper-a", fit_ha, "custom hyper-g a");
  fit->add_option("--hyper-b", fit_hb, "custom hyper-g b");
  fit->add_option("--hyper-c", fit_hc, "custom hyper-g c");
  fit->add_option("--hyper-d", fit_hd, "custom hyper-g d");
  fit->add_option("--model-prior", fit_model_prior, "model-space prior")
      ->check(CLI::IsMember({"beta-binomial", "uniform"}));
  fit->add_option("--budget", fit_budget, "max model cardinality, -1 = unbounded");
  fit->add_flag("--enumerate", fit_enumerate, "exhaustive model enumeration (default, p <= 25)");
  fit->add_option("--gibbs", fit_gibbs, "model-space Gibbs sweeps instead of enumeration");

  // summarize
  auto* summarize = app.add_subcommand("summarize", "path + sparsity summary from stored draws");
  DataOpts sum_data;
  add_data_opts(summarize, sum_data);
  std::string sum_out, sum_weights = "posterior-mean", sum_design_csv;
  double sum_level = 0.90;
  summarize->add_option("--out", sum_out, "output directory with draws.csv")->required();
  summarize->add_option("--weights", sum_weights, "adaptive penalty weights")
      ->check(CLI::IsMember({"posterior-mean", "unit"}));
  summarize->add_option("--level", sum_level, "credible interval level");
  summarize->add_option("--design-csv", sum_design_csv,
                        "extra prediction rows (raw scale) appended to the training design");

  // select
  auto* select = app.add_subcommand("select", "print the selection report without writing files");
  DataOpts sel_data;
  add_data_opts(select, sel_data);
  std::string sel_out, sel_weights = "posterior-mean", sel_design_csv;
  double sel_level = 0.90;
  select->add_option("--out", sel_out, "output directory with draws.csv")->required();
  select->add_option("--weights", sel_weights, "adaptive penalty weights")
      ->check(CLI::IsMember({"posterior-mean", "unit"}));
  select->add_option("--level", sel_level, "credible interval level");
  select->add_option("--design-csv", sel_design_csv, "extra prediction rows (raw scale)");

  // plot
  auto* plot = app.add_subcommand("plot", "render the three summary figures from stored CSVs");
  std::string plot_out;
  plot->add_option("--out", plot_out, "output directory with summary.csv and path.csv")
      ->required();

  // glm-summarize
  auto* glm = app.add_subcommand("glm-summarize", "logistic path + excess-error summary");
  DataOpts glm_data_opts;
  add_data_opts(glm, glm_data_opts);
  std::string glm_out;
  int glm_grid_points = 50;
  double glm_level = 0.90;
  bool glm_sample_rw = false;
  int glm_rw_draws = 5000, glm_rw_burn = 1000;
  double glm_rw_step = 0.1, glm_rw_prior_sd = 10.0;
  std::uint64_t glm_seed = 0, glm_stream = 0;
  glm->add_option("--out", glm_out, "output directory")->required();
  glm->add_option("--grid-points", glm_grid_points, "penalty grid size");
  glm->add_option("--level", glm_level, "credible interval level");
  glm->add_flag("--sample-rw", glm_sample_rw,
                "run the built-in random-walk sampler instead of reading draws.csv");
  glm->add_option("--draws", glm_rw_draws, "sampler draws (with --sample-rw)");
  glm->add_option("--burn", glm_rw_burn, "sampler burn-in (with --sample-rw)");
  glm->add_option("--step", glm_rw_step, "random-walk step size");
  glm->add_option("--prior-sd", glm_rw_prior_sd, "normal prior scale");
  glm->add_option("--seed", glm_seed, "rng seed");
  glm->add_option("--stream", glm_stream, "rng stream");

  // graph-summarize
  auto* graph = app.add_subcommand("graph-summarize", "sparse precision path from a covariance posterior");
  std::string graph_data, graph_sigma_csv, graph_out;
  int graph_grid_points = 20, graph_cov_draws = 1000;
  std::uint64_t graph_seed = 0, graph_stream = 0;
  graph->add_option("--data", graph_data, "CSV of observations (all columns are variables)");
  graph->add_option("--sigma-csv", graph_sigma_csv, "imported posterior mean covariance (p x p)");
  graph->add_option("--out", graph_out, "output directory")->required();
  graph->add_option("--grid-points", graph_grid_points, "penalty grid size");
  graph->add_option("--cov-draws", graph_cov_draws, "covariance posterior draws");
  graph->add_option("--seed", graph_seed, "rng seed");
  graph->add_option("--stream", graph_stream, "rng stream");

  // export
  auto* exp = app.add_subcommand("export", "write the processed dataset and draw diagnostics");
  DataOpts exp_data;
  add_data_opts(exp, exp_data);
  std::string exp_out;
  exp->add_option("--out", exp_out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*fit) {
      const dss::Dataset data =
          dss::load_csv(fit_data.data_file, fit_data.response, fit_data.log_columns);
      ensure_out_dir(fit_out);
      json manifest = load_manifest(fit_out);
      json cfg{{"version", dss::kVersion},
               {"schema", dss::kSchemaVersion},
               {"data", fit_data.data_file},
               {"response", fit_data.response},
               {"log", names_json(fit_data.log_columns)},
               {"prior", fit_prior},
               {"draws", fit_draws},
               {"seed", fit_seed},
               {"stream", fit_stream},
               {"n", data.n()},
               {"p", data.p()},
               {"names", names_json(data.names)}};

      if (fit_prior == "horseshoe") {
        dss::HorseshoeOptions opts;
        opts.draws = fit_draws;
        opts.burn = fit_burn;
        opts.thin = fit_thin;
        opts.chains = fit_chains;
        opts.noise_scaled_global = fit_noise_scaled;
        opts.frozen_scales = fit_frozen;
        const dss::PosteriorDraws draws =
            dss::sample_horseshoe(data, opts, {fit_seed, fit_stream});
        dss::write_draws_csv(join_path(fit_out, "draws.csv"), draws);
        const std::vector<bool> keep = dss::horseshoe_threshold(draws);
        std::vector<std::string> kept;
        for (int j = 0; j < data.p(); ++j)
          if (keep[static_cast<std::size_t>(j)]) kept.push_back(data.names[static_cast<std::size_t>(j)]);
        cfg["burn"] = fit_burn;
        cfg["thin"] = fit_thin;
        cfg["chains"] = fit_chains;
        cfg["noise_scaled_global"] = fit_noise_scaled;
        cfg["frozen_scales"] = fit_frozen;
        cfg["threshold_keep"] = names_json(kept);
        std::cout << "wrote " << join_path(fit_out, "draws.csv") << " (" << draws.draws()
                  << " draws, " << data.p() << " predictors)\n";
        std::cout << "shrinkage-weight threshold keeps: " << join(kept, " ") << "\n";
      } else {
        dss::PriorConfig pc;
        if (!fit_hyper.empty()) {
          if (fit_hyper == "cui-george") pc = dss::preset_cui_george();
          else if (fit_hyper == "hyper-g") pc = dss::preset_hyper_g();
          else if (fit_hyper == "hyper-g-n") pc = dss::preset_hyper_g_n(data.n());
          else if (fit_hyper == "maruyama-george") pc = dss::preset_maruyama_george();
          else {
            pc.family = dss::PriorConfig::Family::HyperG;
            pc.a = fit_ha;
            pc.b = fit_hb;
            pc.c = fit_hc;
            pc.d = fit_hd;
          }
        } else {
          double g = 0.0;
          if (fit_g == "n") g = static_cast<double>(data.n());
          else {
            char* end = nullptr;
            g = std::strtod(fit_g.c_str(), &end);
            if (end == fit_g.c_str() || *end != '\0')
              throw dss::ArgumentError("cannot parse --g value: " + fit_g);
          }
          pc = dss::preset_fixed_g(g);
        }
        pc.model_prior = fit_model_prior == "uniform" ? dss::PriorConfig::ModelPrior::Uniform
                                                      : dss::PriorConfig::ModelPrior::BetaBinomial;
        pc.budget = fit_budget;

        dss::ModelSpacePosterior space;
        if (fit_gibbs > 0) {
          space = dss::gibbs_search(data, pc, fit_gibbs, {fit_seed, fit_stream});
        } else {
          space = dss::enumerate_models(data, pc);
        }
        dss::write_models_csv(join_path(fit_out, "models.csv"), space);
        dss::write_inclusion_csv(join_path(fit_out, "inclusion.csv"), space, data.names);
        const dss::PosteriorDraws draws =
            dss::bma_draws(data, space, pc, fit_draws, {fit_seed, fit_stream + 1});
        dss::write_draws_csv(join_path(fit_out, "draws.csv"), draws);

        const dss::ModelId hpm = dss::extract_hpm(space);
        const dss::ModelId mpm = dss::extract_mpm(space);
        cfg["g"] = fit_g;
        cfg["hyper"] = fit_hyper;
        cfg["model_prior"] = fit_model_prior;
        cfg["budget"] = fit_budget;
        cfg["search"] = fit_gibbs > 0 ? "gibbs" : "enumerate";
        cfg["gibbs_sweeps"] = fit_gibbs;
        cfg["models"] = static_cast<std::int64_t>(space.models.size());
        cfg["hpm"] = dss::model_bitstring(hpm, data.p());
        cfg["mpm"] = dss::model_bitstring(mpm, data.p());
        std::cout << "evaluated " << space.models.size() << " models ("
                  << (space.exact ? "exact" : "sampled") << ")\n";
        std::cout << "highest-probability model: " << dss::model_bitstring(hpm, data.p()) << " ("
                  << hpm.cardinality << " variables)\n";
        std::cout << "median-probability model:  " << dss::model_bitstring(mpm, data.p()) << " ("
                  << mpm.cardinality << " variables)\n";
        std::cout << "wrote " << join_path(fit_out, "draws.csv") << " (" << draws.draws()
                  << " draws via model averaging)\n";
      }
      manifest["fit"] = cfg;
      save_manifest(fit_out, manifest);
      return 0;
    }

    if (*summarize || *select) {
      const bool writing = static_cast<bool>(*summarize);
      const DataOpts& d = writing ? sum_data : sel_data;
      const std::string out = writing ? sum_out : sel_out;
      const std::string weights = writing ? sum_weights : sel_weights;
      const double level = writing ? sum_level : sel_level;
      const std::string design_csv = writing ? sum_design_csv : sel_design_csv;

      const dss::Dataset data = dss::load_csv(d.data_file, d.response, d.log_columns);
      const std::string draws_path = join_path(out, "draws.csv");
      require_artifact(draws_path, "fit");
      const dss::PosteriorDraws draws = dss::read_draws_csv(draws_path);
      SummarizeResult r = run_summary_pipeline(data, draws, weights, level, design_csv);

      if (writing) {
        dss::write_path_csv(join_path(out, "path.csv"), r.path);
        dss::write_summary_csv(join_path(out, "summary.csv"), r.summary);
        write_text(join_path(out, "report.txt"), r.report);
        json manifest = load_manifest(out);
        manifest["summarize"] = json{{"version", dss::kVersion},
                                     {"schema", dss::kSchemaVersion},
                                     {"data", d.data_file},
                                     {"response", d.response},
                                     {"weights", weights},
                                     {"level", level},
                                     {"design", design_csv.empty() ? "training" : "augmented"},
                                     {"design_csv", design_csv},
                                     {"names", names_json(data.names)},
                                     {"selected_size", r.selection.cardinality},
                                     {"selected_support",
                                      names_json(support_names(r.selection.support, data.names))}};
        save_manifest(out, manifest);
        std::cout << "selected size " << r.selection.cardinality << ": "
                  << join(support_names(r.selection.support, data.names), " ") << "\n";
        std::cout << "wrote path.csv, summary.csv, report.txt under " << out << "\n";
      } else {
        std::cout << r.report;
      }
      return 0;
    }

    if (*plot) {
      const std::string summary_path = join_path(plot_out, "summary.csv");
      const std::string path_path = join_path(plot_out, "path.csv");
      require_artifact(summary_path, "summarize");
      require_artifact(path_path, "summarize");

      const dss::CsvTable st = dss::read_csv(summary_path);
      for (const char* c : {"cardinality", "rho_mean", "rho_lo", "rho_hi", "psi_mean", "psi_lo",
                            "psi_hi", "benchmark"})
        if (st.col(c) < 0) throw dss::SchemaError(summary_path + ": missing column " + c);
      std::vector<double> card, rmean, rlo, rhi, pmean, plo, phi_;
      double benchmark = std::numeric_limits<double>::quiet_NaN();
      for (std::size_t i = 0; i < st.rows.size(); ++i) {
        auto cell = [&](const char* c) {
          return dss::parse_number(st.rows[i][static_cast<std::size_t>(st.col(c))], i + 2, 1);
        };
        card.push_back(cell("cardinality"));
        rmean.push_back(cell("rho_mean"));
        rlo.push_back(cell("rho_lo"));
        rhi.push_back(cell("rho_hi"));
        pmean.push_back(cell("psi_mean"));
        plo.push_back(cell("psi_lo"));
        phi_.push_back(cell("psi_hi"));
        benchmark = cell("benchmark");
      }
      if (card.empty()) throw dss::SchemaError(summary_path + ": no rows");

      const bool have_rho = std::any_of(rmean.begin(), rmean.end(),
                                        [](double v) { return std::isfinite(v); });
      if (have_rho)
        write_text(join_path(plot_out, "rho.svg"),
                   dss::rho_plot_svg(card, rmean, rlo, rhi, benchmark));
      write_text(join_path(plot_out, "psi.svg"), dss::psi_plot_svg(card, pmean, plo, phi_));

      // coefficient magnitudes: first path entry per cardinality, x = that
      // cardinality's mean psi
      const dss::CsvTable pt = dss::read_csv(path_path);
      if (pt.header.size() < 3 || pt.header[0] != "lambda" || pt.header[1] != "cardinality")
        throw dss::SchemaError(path_path + ": expected lambda, cardinality, coefficient columns");
      const std::size_t gamma_start = pt.header[2] == "intercept" ? 3 : 2;
      const int p = static_cast<int>(pt.header.size() - gamma_start);
      if (p < 1) throw dss::SchemaError(path_path + ": no coefficient columns");
      std::vector<int> seen_card;
      std::vector<std::vector<double>> gammas;  // per retained entry
      for (std::size_t i = 0; i < pt.rows.size(); ++i) {
        const int c = static_cast<int>(dss::parse_number(pt.rows[i][1], i + 2, 2));
        if (std::find(seen_card.begin(), seen_card.end(), c) != seen_card.end()) continue;
        seen_card.push_back(c);
        std::vector<double> g;
        for (int j = 0; j < p; ++j)
          g.push_back(dss::parse_number(pt.rows[i][gamma_start + static_cast<std::size_t>(j)],
                                        i + 2, gamma_start + static_cast<std::size_t>(j) + 1));
        gammas.push_back(std::move(g));
      }
      // order by cardinality descending (psi ascending, small models rightward)
      std::vector<std::size_t> order(seen_card.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return seen_card[a] > seen_card[b];
      });
      std::vector<double> psi_x;
      std::vector<std::vector<double>> series(static_cast<std::size_t>(p));
      for (std::size_t oi : order) {
        const int c = seen_card[oi];
        double px = std::numeric_limits<double>::quiet_NaN();
        for (std::size_t i = 0; i < card.size(); ++i)
          if (static_cast<int>(card[i]) == c) px = pmean[i];
        if (!std::isfinite(px)) continue;
        psi_x.push_back(px);
        for (int j = 0; j < p; ++j)
          series[static_cast<std::size_t>(j)].push_back(
              std::abs(gammas[oi][static_cast<std::size_t>(j)]));
      }
      const json manifest = load_manifest(plot_out);
      write_text(join_path(plot_out, "coef.svg"),
                 dss::coef_plot_svg(psi_x, series, manifest_names(manifest, p)));
      std::cout << "wrote " << (have_rho ? "rho.svg, " : "") << "psi.svg, coef.svg under "
                << plot_out << "\n";
      return 0;
    }

    if (*glm) {
      dss::Dataset raw =
          dss::load_csv(glm_data_opts.data_file, glm_data_opts.response, glm_data_opts.log_columns,
                        /*do_standardize=*/false);
      for (Eigen::Index i = 0; i < raw.Y.size(); ++i)
        if (raw.Y[i] != 0.0 && raw.Y[i] != 1.0)
          throw dss::ArgumentError("logistic response must be 0/1");
      // standardize predictors only; the 0/1 response stays untouched
      Eigen::MatrixXd xs(raw.X.rows(), raw.X.cols());
      const double denom = static_cast<double>(raw.X.rows() - 1);
      for (Eigen::Index j = 0; j < raw.X.cols(); ++j) {
        const double mu = raw.X.col(j).mean();
        const double sd = std::sqrt((raw.X.col(j).array() - mu).square().sum() / denom);
        if (sd < 1e-13 * (1.0 + std::abs(mu)))
          throw dss::DegenerateInputError("constant column: " +
                                          raw.names[static_cast<std::size_t>(j)]);
        xs.col(j) = (raw.X.col(j).array() - mu) / sd;
      }
      dss::PredictionDesign design;
      design.Xtilde = xs;

      ensure_out_dir(glm_out);
      dss::PosteriorDraws draws;
      if (glm_sample_rw) {
        dss::LogisticRwOptions opts;
        opts.draws = glm_rw_draws;
        opts.burn = glm_rw_burn;
        opts.step = glm_rw_step;
        opts.prior_sd = glm_rw_prior_sd;
        draws = dss::sample_logistic_rw(xs, raw.Y, opts, {glm_seed, glm_stream});
        dss::write_draws_csv(join_path(glm_out, "draws.csv"), draws);
      } else {
        const std::string draws_path = join_path(glm_out, "draws.csv");
        require_artifact(draws_path, "glm-summarize --sample-rw");
        draws = dss::read_draws_csv(draws_path);
      }

      const Eigen::VectorXd pi_bar = dss::posterior_mean_probs(draws, design);
      const std::vector<double> grid = dss::default_glm_grid(design, pi_bar, glm_grid_points);
      const dss::GlmPath path = dss::logistic_solve_path(design, pi_bar, grid);
      const dss::GlmSummary summary = dss::glm_summarize(path, draws, design, glm_level);
      dss::write_glm_path_csv(join_path(glm_out, "path.csv"), path);
      dss::write_glm_summary_csv(join_path(glm_out, "summary.csv"), summary);

      std::ostringstream rep;
      rep << "logistic sparse posterior summary\n";
      rep << "=================================\n\n";
      rep << "draws: " << draws.draws() << " (prior: " << draws.prior << ")\n";
      rep << "design rows: " << design.rows() << "\n";
      rep << "interval level: " << fmt(glm_level * 100.0, "%.0f") << "%\n\n";
      rep << "size  psi mean [lo, hi]          support\n";
      for (const auto& row : summary.rows) {
        char line[160];
        std::snprintf(line, sizeof(line), "%4d  %.5f [%.5f, %.5f]", row.cardinality,
                      row.psi_mean, row.psi_lo, row.psi_hi);
        rep << line << "   " << join(support_names(row.support, raw.names), " ") << "\n";
      }
      write_text(join_path(glm_out, "report.txt"), rep.str());

      json manifest = load_manifest(glm_out);
      manifest["glm-summarize"] = json{{"version", dss::kVersion},
                                       {"schema", dss::kSchemaVersion},
                                       {"data", glm_data_opts.data_file},
                                       {"response", glm_data_opts.response},
                                       {"grid_points", glm_grid_points},
                                       {"level", glm_level},
                                       {"sampler", glm_sample_rw ? "rw-metropolis" : "imported"},
                                       {"seed", glm_seed},
                                       {"stream", glm_stream},
                                       {"names", names_json(raw.names)}};
      save_manifest(glm_out, manifest);
      std::cout << "wrote path.csv, summary.csv, report.txt under " << glm_out << "\n";
      return 0;
    }

    if (*graph) {
      if (graph_data.empty() == graph_sigma_csv.empty())
        throw dss::ArgumentError("provide exactly one of --data or --sigma-csv");
      ensure_out_dir(graph_out);
      Eigen::MatrixXd sigma_bar;
      std::string source;
      if (!graph_sigma_csv.empty()) {
        sigma_bar = dss::read_matrix_csv(graph_sigma_csv);
        source = "imported";
      } else {
        const dss::CsvTable t = dss::read_csv(graph_data);
        Eigen::MatrixXd x(t.rows.size(), t.header.size());
        for (std::size_t i = 0; i < t.rows.size(); ++i)
          for (std::size_t j = 0; j < t.header.size(); ++j)
            x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                dss::parse_number(t.rows[i][j], i + 2, j + 1);
        const dss::CovPosterior post =
            dss::sample_covariance_posterior(x, graph_cov_draws, {graph_seed, graph_stream});
        sigma_bar = post.sigma_bar;
        source = "conjugate";
      }
      dss::write_matrix_csv(join_path(graph_out, "sigma_bar.csv"), sigma_bar);

      const std::vector<double> grid = dss::default_graph_grid(sigma_bar, graph_grid_points);
      const std::vector<dss::PrecisionPathEntry> path = dss::graph_solve_path(sigma_bar, grid);

      dss::CsvTable pt;
      pt.header = {"lambda", "edges"};
      dss::CsvTable et;
      et.header = {"lambda", "i", "j", "value"};
      for (const auto& e : path) {
        pt.rows.push_back({dss::format_double(e.lambda), std::to_string(e.edges.size())});
        for (const auto& [i, j] : e.edges)
          et.rows.push_back({dss::format_double(e.lambda), std::to_string(i + 1),
                             std::to_string(j + 1), dss::format_double(e.Gamma(i, j))});
      }
      dss::write_csv(join_path(graph_out, "graph_path.csv"), pt);
      dss::write_csv(join_path(graph_out, "edges.csv"), et);
      dss::write_matrix_csv(join_path(graph_out, "precision.csv"), path.back().Gamma);

      json manifest = load_manifest(graph_out);
      manifest["graph-summarize"] = json{{"version", dss::kVersion},
                                         {"schema", dss::kSchemaVersion},
                                         {"source", source},
                                         {"data", graph_data},
                                         {"sigma_csv", graph_sigma_csv},
                                         {"grid_points", graph_grid_points},
                                         {"cov_draws", graph_cov_draws},
                                         {"seed", graph_seed},
                                         {"stream", graph_stream},
                                         {"p", static_cast<int>(sigma_bar.rows())}};
      save_manifest(graph_out, manifest);
      std::cout << "wrote sigma_bar.csv, graph_path.csv, edges.csv, precision.csv under "
                << graph_out << "\n";
      return 0;
    }

    if (*exp) {
      const dss::Dataset data =
          dss::load_csv(exp_data.data_file, exp_data.response, exp_data.log_columns);
      ensure_out_dir(exp_out);
      dss::CsvTable t;
      t.header = data.names;
      t.header.push_back(exp_data.response);
      for (int i = 0; i < data.n(); ++i) {
        std::vector<std::string> row;
        for (int j = 0; j < data.p(); ++j) row.push_back(dss::format_double(data.X(i, j)));
        row.push_back(dss::format_double(data.Y[i]));
        t.rows.push_back(std::move(row));
      }
      dss::write_csv(join_path(exp_out, "dataset.csv"), t);
      std::cout << "wrote standardized dataset.csv under " << exp_out << "\n";

      const std::string draws_path = join_path(exp_out, "draws.csv");
      if (fs::exists(draws_path)) {
        const dss::PosteriorDraws draws = dss::read_draws_csv(draws_path);
        const Eigen::VectorXd ess = dss::effective_sample_size(draws.beta);
        dss::CsvTable e;
        e.header = {"name", "ess"};
        for (int j = 0; j < draws.p(); ++j) {
          const std::string name = j < data.p() ? data.names[static_cast<std::size_t>(j)]
                                                : "beta_" + std::to_string(j + 1);
          e.rows.push_back({name, dss::format_double(ess[j])});
        }
        dss::write_csv(join_path(exp_out, "ess.csv"), e);
        std::cout << "wrote ess.csv under " << exp_out << "\n";
      }
      return 0;
    }
  } catch (const dss::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
