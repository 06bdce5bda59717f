#include "vrt/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "vrt/fingerprint.hpp"

namespace vrt {

namespace {

using nlohmann::json;

std::uint64_t content_fingerprint(const PipelineInput& input) {
  Fingerprint fp;
  fp.add(std::string_view("vrt-input"));
  for (const auto& n : input.layout.nodes())
    fp.add(n.node_id).add(n.position.x).add(n.position.y);
  for (const Link& l : input.link_set().links()) fp.add(l.tx).add(l.rx);
  fp.add(input.grid.origin().x).add(input.grid.origin().y);
  fp.add(input.grid.voxel_size()).add(input.grid.nx()).add(input.grid.ny());
  for (const auto& series : input.trace.samples)
    for (double s : series) fp.add(s);
  for (std::size_t i = 0; i < input.truth.positions.size(); ++i)
    fp.add(input.truth.frame_t[i])
        .add(input.truth.positions[i].x)
        .add(input.truth.positions[i].y);
  fp.add(input.calibration_end);
  return fp.value();
}

std::uint64_t operator_fingerprint(const PipelineInput& input,
                                   const PipelineConfig& cfg) {
  Fingerprint fp;
  fp.add(input.input_fingerprint);
  fp.add(std::string_view(estimator_name(cfg.estimator)));
  fp.add(cfg.window);
  fp.add(cfg.weights.lambda_ell).add(cfg.weights.phi);
  fp.add(cfg.vrti.alpha).add(static_cast<int>(cfg.vrti.q_kind));
  fp.add(cfg.subvrt.k);
  fp.add(cfg.sigma_x2).add(cfg.delta);
  return fp.value();
}

std::string join_path(const std::string& dir, const char* name) {
  if (dir.empty()) return {};
  return dir.back() == '/' ? dir + name : dir + "/" + name;
}

std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

template <typename Fn>
auto stage(const char* name, Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("pipeline stage '") + name +
                             "' failed: " + e.what());
  }
}

}  // namespace

PipelineInput simulate_input(const ScenarioConfig& cfg) {
  auto links = std::make_shared<const LinkSet>(
      enumerate_links(cfg.layout, LinkMode::AllPairs));
  SimOutput sim = simulate_rss(cfg, *links);
  PipelineInput input{cfg.layout,
                      links,
                      cfg.grid,
                      std::move(sim.trace),
                      std::move(sim.truth),
                      sim.calibration_end,
                      cfg.name.empty() ? "scenario" : cfg.name,
                      0};
  input.trace.link_set = input.links.get();
  input.input_fingerprint = content_fingerprint(input);
  return input;
}

PipelineInput load_input(const std::string& layout_csv, const std::string& trace_csv,
                         const std::string& truth_csv, int calibration_end,
                         double sample_interval_s) {
  SensorLayout layout = load_layout_csv(layout_csv);
  auto links = std::make_shared<const LinkSet>(
      enumerate_links(layout, LinkMode::AllPairs));
  RssTrace trace = parse_trace_csv(trace_csv, *links, sample_interval_s);
  GroundTruth truth;
  if (!truth_csv.empty()) truth = load_truth_csv(truth_csv);
  // Grid defaults to 0.3 m voxels over the node bounding box; callers that
  // need another grid can override the member afterwards.
  double min_x = layout.nodes()[0].position.x, max_x = min_x;
  double min_y = layout.nodes()[0].position.y, max_y = min_y;
  for (const auto& n : layout.nodes()) {
    min_x = std::min(min_x, n.position.x);
    max_x = std::max(max_x, n.position.x);
    min_y = std::min(min_y, n.position.y);
    max_y = std::max(max_y, n.position.y);
  }
  const double h = 0.3;
  const int nx = std::max(1, static_cast<int>(std::ceil((max_x - min_x) / h)));
  const int ny = std::max(1, static_cast<int>(std::ceil((max_y - min_y) / h)));
  PipelineInput input{std::move(layout),
                      links,
                      VoxelGrid({min_x, min_y}, h, nx, ny),
                      std::move(trace),
                      std::move(truth),
                      calibration_end,
                      trace_csv,
                      0};
  input.trace.link_set = input.links.get();
  input.input_fingerprint = content_fingerprint(input);
  return input;
}

CalibrationProducts calibrate(const PipelineInput& input, int window) {
  CalibrationProducts products;
  const auto frames = stage("variance", [&] {
    return windowed_variance(input.trace, window);
  });
  products.split = stage("split", [&] {
    return split_calibration(frames, input.calibration_end);
  });
  products.covariance = stage("covariance", [&] {
    return sample_covariance(products.split.calibration);
  });
  products.eigen = stage("eigen", [&] { return eigen_networks(products.covariance); });
  products.shrunk = stage("shrinkage", [&] {
    return ledoit_wolf(products.split.calibration);
  });
  return products;
}

PipelineResult run_pipeline(const PipelineInput& input, const PipelineConfig& cfg,
                            const std::string& out_dir) {
  return run_pipeline(input, cfg, calibrate(input, cfg.window), out_dir);
}

PipelineResult run_pipeline(const PipelineInput& input, const PipelineConfig& cfg,
                            const CalibrationProducts& products,
                            const std::string& out_dir) {
  const std::uint64_t op_fp = operator_fingerprint(input, cfg);

  const WeightMatrix w = stage("forward-model", [&] {
    return build_weight_matrix(input.layout, input.link_set(), input.grid,
                               cfg.weights);
  });

  const ProjectionOperator op = stage("operator", [&]() -> ProjectionOperator {
    switch (cfg.estimator) {
      case EstimatorKind::Vrti:
        return build_vrti(w, cfg.vrti, input.grid, op_fp);
      case EstimatorKind::SubVrt: {
        ProjectionOperator vrti = build_vrti(w, cfg.vrti, input.grid, op_fp);
        return build_subvrt(vrti, products.eigen, cfg.subvrt, op_fp);
      }
      case EstimatorKind::Lsvrt: {
        const SpatialCovariance c_x =
            exp_spatial_cov(input.grid, cfg.sigma_x2, cfg.delta);
        return build_lsvrt(w, products.shrunk, c_x, op_fp);
      }
    }
    throw std::invalid_argument("unknown estimator kind");
  });

  PipelineResult result;
  result.scree.assign(
      products.eigen.eigenvalues.data(),
      products.eigen.eigenvalues.data() + products.eigen.eigenvalues.size());

  stage("localize", [&] {
    result.estimates.reserve(products.split.realtime.size());
    result.frame_t.reserve(products.split.realtime.size());
    for (const VarianceFrame& frame : products.split.realtime) {
      const MotionImage img = estimate_image(op, frame);
      result.estimates.push_back(localize(img, input.grid));
      result.frame_t.push_back(frame.t);
    }
    return 0;
  });

  const bool have_truth = !input.truth.positions.empty();
  if (have_truth) {
    stage("metrics", [&] {
      if (input.truth.positions.size() != result.estimates.size())
        throw std::invalid_argument(
            "ground truth does not align with realtime frames");
      for (std::size_t i = 0; i < result.frame_t.size(); ++i)
        if (input.truth.frame_t[i] != result.frame_t[i])
          throw std::invalid_argument("ground truth frame indices mismatch");
      result.errors = localization_errors(result.estimates, input.truth);
      result.errors.estimator = estimator_name(cfg.estimator);
      result.errors.scenario_id = input.scenario_id;
      result.metrics.rmse = rmse(result.errors);
      result.metrics.p97 = error_percentile(result.errors, 0.97);
      return 0;
    });
  }

  if (cfg.tracking) {
    stage("tracking", [&] {
      const TrackResult track = track_sequence(result.estimates, cfg.kalman);
      result.tracked_estimates.reserve(track.states.size());
      for (const TrackState& s : track.states)
        result.tracked_estimates.push_back(s.position());
      if (have_truth) {
        ErrorSeries tracked =
            localization_errors(result.tracked_estimates, input.truth);
        tracked.estimator = result.errors.estimator;
        tracked.scenario_id = result.errors.scenario_id;
        result.metrics.tracked_rmse = rmse(tracked);
        result.metrics.tracked_p97 = error_percentile(tracked, 0.97);
        result.tracked_errors = std::move(tracked);
      }
      return 0;
    });
  }

  result.metrics.frames = static_cast<int>(result.estimates.size());
  {
    Fingerprint fp;
    fp.add(op_fp);
    fp.add(static_cast<int>(cfg.tracking));
    fp.add(cfg.kalman.sigma_w2).add(cfg.kalman.sigma_v2);
    result.metrics.fingerprint = fp.value();
  }

  if (!out_dir.empty()) {
    stage("artifacts", [&] {
      write_estimates_csv(result.frame_t, result.estimates,
                          join_path(out_dir, "estimates.csv"));
      write_scree_csv(result.scree, join_path(out_dir, "scree.csv"));
      if (have_truth)
        write_errors_csv(result.frame_t, result.errors,
                         join_path(out_dir, "errors.csv"));
      if (cfg.tracking) {
        write_estimates_csv(result.frame_t, result.tracked_estimates,
                            join_path(out_dir, "track.csv"));
        if (result.tracked_errors)
          write_errors_csv(result.frame_t, *result.tracked_errors,
                           join_path(out_dir, "errors_tracked.csv"));
      }
      write_metrics_json(result.metrics, estimator_name(cfg.estimator),
                         input.scenario_id, cfg.tracking,
                         join_path(out_dir, "metrics.json"));
      return 0;
    });
  }
  return result;
}

SweepResult sweep(const PipelineInput& input, const PipelineConfig& cfg,
                  const std::string& parameter, const std::vector<double>& values,
                  const std::string& out_dir) {
  if (values.empty()) throw std::invalid_argument("sweep needs at least one value");
  if (parameter != "k" && parameter != "sigma_x2" && parameter != "sigma_v2" &&
      parameter != "alpha")
    throw std::invalid_argument("unknown sweep parameter: " + parameter);

  const CalibrationProducts products = calibrate(input, cfg.window);
  SweepResult result;
  result.parameter = parameter;
  result.values = values;
  result.rmse.reserve(values.size());
  for (double value : values) {
    PipelineConfig run_cfg = cfg;
    if (parameter == "k") {
      const int k = static_cast<int>(value);
      if (static_cast<double>(k) != value)
        throw std::invalid_argument("k sweep values must be integers");
      run_cfg.subvrt.k = k;
    } else if (parameter == "sigma_x2") {
      run_cfg.sigma_x2 = value;
    } else if (parameter == "sigma_v2") {
      run_cfg.kalman.sigma_v2 = value;
    } else {
      run_cfg.vrti.alpha = value;
    }
    const PipelineResult run = run_pipeline(input, run_cfg, products);
    const double score = run_cfg.tracking && run.metrics.tracked_rmse
                             ? *run.metrics.tracked_rmse
                             : run.metrics.rmse;
    result.rmse.push_back(score);
  }
  if (!out_dir.empty())
    write_sweep_csv(result, join_path(out_dir, "sweep.csv"));
  return result;
}

std::uint64_t pipeline_fingerprint(const PipelineInput& input,
                                   const PipelineConfig& cfg) {
  Fingerprint fp;
  fp.add(operator_fingerprint(input, cfg));
  fp.add(static_cast<int>(cfg.tracking));
  fp.add(cfg.kalman.sigma_w2).add(cfg.kalman.sigma_v2);
  return fp.value();
}

void write_estimates_csv(const std::vector<int>& frame_t,
                         const std::vector<Vec2>& estimates,
                         const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "frame,x,y\n";
  char buf[96];
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g\n", frame_t[i],
                  estimates[i].x, estimates[i].y);
    out << buf;
  }
}

void write_errors_csv(const std::vector<int>& frame_t, const ErrorSeries& errors,
                      const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "frame,e_loc\n";
  char buf[64];
  for (std::size_t i = 0; i < errors.errors.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g\n", frame_t[i], errors.errors[i]);
    out << buf;
  }
}

void write_scree_csv(const std::vector<double>& scree, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "index,eigenvalue\n";
  char buf[64];
  for (std::size_t i = 0; i < scree.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", i + 1, scree[i]);
    out << buf;
  }
}

void write_metrics_json(const PipelineMetrics& metrics, const std::string& estimator,
                        const std::string& scenario_id, bool tracking,
                        const std::string& path) {
  json j{
      {"estimator", estimator},
      {"scenario", scenario_id},
      {"frames", metrics.frames},
      {"rmse", metrics.rmse},
      {"p97", metrics.p97},
      {"tracking", tracking},
      {"fingerprint", hex64(metrics.fingerprint)},
  };
  if (metrics.tracked_rmse) j["tracked_rmse"] = *metrics.tracked_rmse;
  if (metrics.tracked_p97) j["tracked_p97"] = *metrics.tracked_p97;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

void write_sweep_csv(const SweepResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "value,rmse\n";
  char buf[80];
  for (std::size_t i = 0; i < result.values.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", result.values[i],
                  result.rmse[i]);
    out << buf;
  }
}

void write_eigen_report_csv(const EigenNetworkReport& report,
                            const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "link_index,tx,rx,u1l\n";
  char buf[96];
  for (const auto& e : report.entries) {
    std::snprintf(buf, sizeof(buf), "%d,%d,%d,%.17g\n", e.link_index, e.tx, e.rx,
                  e.u1l);
    out << buf;
  }
}

}  // namespace vrt
