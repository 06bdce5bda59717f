// Command-line driver: scenario simulation, calibration reports, end-to-end
// localization and tracking, and parameter sweeps.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "vrt/kernels.hpp"
#include "vrt/pipeline.hpp"

namespace {

struct InputArgs {
  std::string scenario;     // calm | windy
  std::string config_json;  // scenario config file
  std::string layout_csv;
  std::string trace_csv;
  std::string truth_csv;
  int calibration_end = -1;
  double sample_interval = 1.0;
  std::optional<std::uint64_t> seed;
};

void add_input_flags(CLI::App* cmd, InputArgs& args) {
  cmd->add_option("--scenario", args.scenario,
                  "pinned reference scenario (calm|windy)");
  cmd->add_option("--config", args.config_json, "scenario config JSON");
  cmd->add_option("--layout", args.layout_csv, "layout CSV (node_id,x,y)");
  cmd->add_option("--trace", args.trace_csv, "trace CSV (t,tx,rx,rss_dbm)");
  cmd->add_option("--truth", args.truth_csv, "ground truth CSV (frame,x,y)");
  cmd->add_option("--calibration-end", args.calibration_end,
                  "last calibration sample index (trace input)");
  cmd->add_option("--sample-interval", args.sample_interval,
                  "trace sample interval in seconds");
  cmd->add_option("--seed", args.seed, "override scenario seed");
}

vrt::ScenarioConfig resolve_scenario(const InputArgs& args) {
  vrt::ScenarioConfig cfg = args.config_json.empty()
                                ? vrt::reference_scenario(args.scenario)
                                : vrt::load_scenario_json(args.config_json);
  if (args.seed) cfg.seed = *args.seed;
  return cfg;
}

vrt::PipelineInput resolve_input(const InputArgs& args) {
  if (!args.scenario.empty() || !args.config_json.empty())
    return vrt::simulate_input(resolve_scenario(args));
  if (args.layout_csv.empty() || args.trace_csv.empty())
    throw CLI::ValidationError(
        "input", "need --scenario, --config, or --layout plus --trace");
  if (args.calibration_end < 0)
    throw CLI::ValidationError("input",
                               "--calibration-end required for trace input");
  return vrt::load_input(args.layout_csv, args.trace_csv, args.truth_csv,
                         args.calibration_end, args.sample_interval);
}

void add_estimator_flags(CLI::App* cmd, vrt::PipelineConfig& cfg,
                         std::string& estimator) {
  cmd->add_option("--estimator", estimator, "vrti | subvrt | lsvrt");
  cmd->add_option("--window", cfg.window, "variance window length m");
  cmd->add_option("--k", cfg.subvrt.k, "intrinsic-subspace dimension");
  cmd->add_option("--alpha", cfg.vrti.alpha, "Tikhonov regularization weight");
  cmd->add_option("--sigma-x2", cfg.sigma_x2, "motion variance for C_x");
  cmd->add_option("--delta", cfg.delta, "C_x space constant (m)");
  cmd->add_option("--lambda", cfg.weights.lambda_ell, "ellipse width (m)");
  cmd->add_option("--phi", cfg.weights.phi, "weight scale");
  cmd->add_option("--sigma-w2", cfg.kalman.sigma_w2, "KF process noise");
  cmd->add_option("--sigma-v2", cfg.kalman.sigma_v2, "KF measurement noise");
}

vrt::EstimatorKind parse_estimator(const std::string& name) {
  if (name == "vrti") return vrt::EstimatorKind::Vrti;
  if (name == "subvrt") return vrt::EstimatorKind::SubVrt;
  if (name == "lsvrt") return vrt::EstimatorKind::Lsvrt;
  throw CLI::ValidationError("--estimator", "must be vrti, subvrt, or lsvrt");
}

void ensure_out_dir(const std::string& out_dir) {
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
}

void print_metrics(const vrt::PipelineMetrics& m) {
  std::printf("frames: %d\n", m.frames);
  if (m.frames > 0) {
    std::printf("rmse: %.4f m\n", m.rmse);
    std::printf("p97:  %.4f m\n", m.p97);
  }
  if (m.tracked_rmse) std::printf("tracked rmse: %.4f m\n", *m.tracked_rmse);
  if (m.tracked_p97) std::printf("tracked p97:  %.4f m\n", *m.tracked_p97);
}

int cmd_simulate(const InputArgs& args, const std::string& out_dir) {
  vrt::ScenarioConfig cfg = resolve_scenario(args);
  ensure_out_dir(out_dir);
  const vrt::LinkSet links = vrt::enumerate_links(cfg.layout, vrt::LinkMode::AllPairs);
  vrt::SimOutput sim = vrt::simulate_rss(cfg, links);

  vrt::save_layout_csv(cfg.layout, out_dir + "/layout.csv");
  vrt::save_trace_csv(sim.trace, out_dir + "/trace.csv");
  vrt::save_truth_csv(sim.truth, out_dir + "/truth.csv");
  vrt::save_scenario_json(cfg, out_dir + "/scenario.json");
  {
    std::ofstream out(out_dir + "/sources.csv");
    out << "source,link_index\n";
    for (std::size_t s = 0; s < sim.source_links.size(); ++s)
      for (int l : sim.source_links[s])
        out << s << "," << l << "\n";
  }
  std::printf("wrote trace with %zu links x %zu samples, calibration_end=%d\n",
              links.size(), sim.trace.length(), sim.calibration_end);
  return 0;
}

int cmd_eigen_report(const InputArgs& args, double threshold,
                     const std::string& out_dir) {
  const vrt::PipelineInput input = resolve_input(args);
  const vrt::CalibrationProducts products = vrt::calibrate(input, 4);
  const vrt::EigenNetworkReport report = vrt::eigen_network_report(
      products.eigen, input.link_set(), input.layout, threshold);
  ensure_out_dir(out_dir);
  if (!out_dir.empty()) {
    vrt::write_eigen_report_csv(report, out_dir + "/eigen_report.csv");
    vrt::write_scree_csv(report.scree, out_dir + "/scree.csv");
  }
  std::printf("links above %.0f%% of max u1: %zu\n", threshold * 100.0,
              report.entries.size());
  for (const auto& e : report.entries)
    std::printf("  link %d (%d->%d): %.4f\n", e.link_index, e.tx, e.rx, e.u1l);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"variance-based device-free localization and tracking"};
  app.require_subcommand(1);

  InputArgs input_args;
  vrt::PipelineConfig pipeline_cfg;
  std::string estimator = "vrti";
  std::string out_dir;
  std::string parameter;
  std::vector<double> sweep_values;
  std::string operator_cache;
  double threshold = 0.30;
  int window = 4;

  auto* simulate = app.add_subcommand("simulate", "generate a synthetic scenario");
  add_input_flags(simulate, input_args);
  simulate->add_option("--out-dir", out_dir, "output directory")->required();

  auto* calibrate = app.add_subcommand("calibrate", "calibration covariance report");
  add_input_flags(calibrate, input_args);
  calibrate->add_option("--window", window, "variance window length m");
  calibrate->add_option("--out-dir", out_dir, "output directory");

  auto* localize = app.add_subcommand("localize", "per-frame localization");
  add_input_flags(localize, input_args);
  add_estimator_flags(localize, pipeline_cfg, estimator);
  localize->add_option("--out-dir", out_dir, "output directory");
  localize->add_option("--operator-cache", operator_cache,
                       "binary operator cache path (reused when fresh)");

  auto* track = app.add_subcommand("track", "localization plus Kalman tracking");
  add_input_flags(track, input_args);
  add_estimator_flags(track, pipeline_cfg, estimator);
  track->add_option("--out-dir", out_dir, "output directory");

  auto* sweep_cmd = app.add_subcommand("sweep", "RMSE over a parameter range");
  add_input_flags(sweep_cmd, input_args);
  add_estimator_flags(sweep_cmd, pipeline_cfg, estimator);
  sweep_cmd->add_option("--param", parameter, "k | sigma_x2 | sigma_v2 | alpha")
      ->required();
  sweep_cmd->add_option("--values", sweep_values, "parameter values")->required();
  sweep_cmd->add_flag("--tracking", pipeline_cfg.tracking,
                      "sweep tracked RMSE instead of raw");
  sweep_cmd->add_option("--out-dir", out_dir, "output directory");

  auto* eigen_report = app.add_subcommand("eigen-report",
                                          "first eigen-network link report");
  add_input_flags(eigen_report, input_args);
  eigen_report->add_option("--threshold", threshold, "fraction of max u1l");
  eigen_report->add_option("--out-dir", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return cmd_simulate(input_args, out_dir);

    if (calibrate->parsed()) {
      const vrt::PipelineInput input = resolve_input(input_args);
      const vrt::CalibrationProducts products = vrt::calibrate(input, window);
      ensure_out_dir(out_dir);
      if (!out_dir.empty()) {
        std::vector<double> scree(
            products.eigen.eigenvalues.data(),
            products.eigen.eigenvalues.data() + products.eigen.eigenvalues.size());
        vrt::write_scree_csv(scree, out_dir + "/scree.csv");
      }
      std::printf("M=%d frames, L=%zu links\n", products.covariance.sample_count,
                  input.link_set().size());
      std::printf("ledoit-wolf nu=%.6f mu=%.6g\n", products.shrunk.nu,
                  products.shrunk.mu);
      std::printf("top eigenvalues:");
      for (int i = 0; i < 5 && i < products.eigen.eigenvalues.size(); ++i)
        std::printf(" %.4g", products.eigen.eigenvalues[i]);
      std::printf("\n");
      return 0;
    }

    if (localize->parsed() || track->parsed()) {
      pipeline_cfg.estimator = parse_estimator(estimator);
      pipeline_cfg.tracking = track->parsed();
      const vrt::PipelineInput input = resolve_input(input_args);
      ensure_out_dir(out_dir);

      if (!operator_cache.empty()) {
        // Warm the cache: rebuild on any fingerprint mismatch.
        const std::uint64_t fp = vrt::pipeline_fingerprint(input, pipeline_cfg);
        try {
          (void)vrt::load_operator(operator_cache, fp);
          std::printf("operator cache fresh: %s\n", operator_cache.c_str());
        } catch (const std::exception&) {
          std::printf("operator cache stale or missing; rebuilding\n");
        }
      }

      const vrt::PipelineResult result =
          vrt::run_pipeline(input, pipeline_cfg, out_dir);
      if (!operator_cache.empty()) {
        const vrt::CalibrationProducts products =
            vrt::calibrate(input, pipeline_cfg.window);
        // Persist the operator for the next identical run.
        const vrt::WeightMatrix w = vrt::build_weight_matrix(
            input.layout, input.link_set(), input.grid, pipeline_cfg.weights);
        const std::uint64_t fp = vrt::pipeline_fingerprint(input, pipeline_cfg);
        vrt::ProjectionOperator op = [&] {
          switch (pipeline_cfg.estimator) {
            case vrt::EstimatorKind::SubVrt:
              return vrt::build_subvrt(w, pipeline_cfg.vrti, products.eigen,
                                       pipeline_cfg.subvrt, input.grid, fp);
            case vrt::EstimatorKind::Lsvrt:
              return vrt::build_lsvrt(
                  w, products.shrunk,
                  vrt::exp_spatial_cov(input.grid, pipeline_cfg.sigma_x2,
                                       pipeline_cfg.delta),
                  fp);
            default:
              return vrt::build_vrti(w, pipeline_cfg.vrti, input.grid, fp);
          }
        }();
        vrt::save_operator(op, operator_cache);
      }
      print_metrics(result.metrics);
      return 0;
    }

    if (sweep_cmd->parsed()) {
      pipeline_cfg.estimator = parse_estimator(estimator);
      const vrt::PipelineInput input = resolve_input(input_args);
      ensure_out_dir(out_dir);
      const vrt::SweepResult result =
          vrt::sweep(input, pipeline_cfg, parameter, sweep_values, out_dir);
      for (std::size_t i = 0; i < result.values.size(); ++i)
        std::printf("%s=%g rmse=%.4f\n", result.parameter.c_str(),
                    result.values[i], result.rmse[i]);
      return 0;
    }

    if (eigen_report->parsed())
      return cmd_eigen_report(input_args, threshold, out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
