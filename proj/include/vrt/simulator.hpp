#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vrt/forward_model.hpp"
#include "vrt/geometry.hpp"
#include "vrt/ingest.hpp"

namespace vrt {

/// A clustered intrinsic-motion source: every link whose segment crosses the
/// disc receives the same AR(1) perturbation, scaled by amplitude.
struct IntrinsicSource {
  Vec2 center;
  double radius = 1.0;       // meters
  double amplitude = 1.0;    // dB
  double correlation = 0.9;  // AR(1) coefficient in [0, 1)
};

struct WalkPath {
  std::vector<Vec2> waypoints;
  double speed = 0.5;        // m/s
  double sample_rate = 3.0;  // Hz
};

struct ScenarioConfig {
  std::string name;
  SensorLayout layout;
  VoxelGrid grid;
  WalkPath path;
  double calibration_duration = 60.0;  // seconds, person absent
  double walk_duration = 60.0;         // seconds of real-time walking
  double baseline_rss = -55.0;         // dBm
  double extrinsic_gain = 2.0;         // dB fading scale while inside an ellipse
  double ellipse_lambda = 0.1;         // Eq.-3 ellipse width of the generative model
  std::vector<IntrinsicSource> intrinsic_sources;
  double measurement_noise_db = 0.5;   // white noise standard deviation
  std::uint64_t seed = 1;

  void validate() const;
};

/// Person position per real-time frame; empty during calibration.
struct GroundTruth {
  std::vector<int> frame_t;      // sample index of each tracked frame
  std::vector<Vec2> positions;   // aligned with frame_t
};

struct SimOutput {
  RssTrace trace;
  GroundTruth truth;             // aligned with frames having t > calibration_end
  int calibration_end = 0;       // last calibration sample index
  std::vector<std::vector<int>> source_links;  // per source: touched link indices
};

/// Constant-speed piecewise-linear walk along the waypoints, sampled at the
/// frame rate; the path loops when the walk outlasts one circuit.
GroundTruth generate_path(const ScenarioConfig& cfg);

/// Position along the waypoint loop after `elapsed` seconds.
Vec2 path_position(const WalkPath& path, double elapsed);

/// Links whose segment passes within `radius` of `center`.
std::vector<int> links_touching_disc(const SensorLayout& layout,
                                     const LinkSet& links, Vec2 center,
                                     double radius);

SimOutput simulate_rss(const ScenarioConfig& cfg, const LinkSet& links);

/// Pinned desk-scale scenarios used by the acceptance suite: "calm" has no
/// intrinsic sources, "windy" adds one strong clustered source near a corner.
ScenarioConfig reference_scenario(const std::string& name);

/// Scenario JSON round-trip (field names match ScenarioConfig).
ScenarioConfig load_scenario_json(const std::string& path);
void save_scenario_json(const ScenarioConfig& cfg, const std::string& path);

/// Ground truth CSV `frame,x,y`.
void save_truth_csv(const GroundTruth& truth, const std::string& path);
GroundTruth load_truth_csv(const std::string& path);

}  // namespace vrt
