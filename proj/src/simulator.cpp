#include "vrt/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "vrt/rng.hpp"

namespace vrt {

namespace {

using nlohmann::json;

// Substream channel tags (documented in the README reproducibility notes).
constexpr std::uint64_t kNoiseChannel = 1;
constexpr std::uint64_t kExtrinsicChannel = 2;
constexpr std::uint64_t kSourceChannel = 3;

struct PathTable {
  std::vector<Vec2> points;       // closed polyline
  std::vector<double> cum_len;    // cumulative length per vertex
  double total = 0.0;
};

PathTable build_path_table(const WalkPath& path) {
  if (path.waypoints.size() < 2)
    throw std::invalid_argument("walk path needs at least 2 waypoints");
  PathTable table;
  table.points = path.waypoints;
  // Close the loop unless the caller already did.
  if (distance(table.points.back(), table.points.front()) > 0.0)
    table.points.push_back(table.points.front());
  table.cum_len.resize(table.points.size(), 0.0);
  for (std::size_t i = 1; i < table.points.size(); ++i) {
    const double seg = distance(table.points[i - 1], table.points[i]);
    if (seg <= 0.0)
      throw std::invalid_argument("coincident consecutive waypoints in path");
    table.cum_len[i] = table.cum_len[i - 1] + seg;
  }
  table.total = table.cum_len.back();
  if (table.total <= 0.0) throw std::invalid_argument("zero-length walk path");
  return table;
}

Vec2 position_on_table(const PathTable& table, double arc) {
  double s = std::fmod(arc, table.total);
  if (s < 0.0) s += table.total;
  for (std::size_t i = 1; i < table.points.size(); ++i) {
    if (s <= table.cum_len[i]) {
      const double seg = table.cum_len[i] - table.cum_len[i - 1];
      const double f = (s - table.cum_len[i - 1]) / seg;
      return table.points[i - 1] + f * (table.points[i] - table.points[i - 1]);
    }
  }
  return table.points.back();
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = ab.x * ab.x + ab.y * ab.y;
  if (len2 <= 0.0) return distance(p, a);
  const double t =
      std::clamp(((p.x - a.x) * ab.x + (p.y - a.y) * ab.y) / len2, 0.0, 1.0);
  return distance(p, a + t * ab);
}

json vec2_json(Vec2 v) { return json::array({v.x, v.y}); }
Vec2 vec2_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

}  // namespace

void ScenarioConfig::validate() const {
  if (path.speed <= 0.0) throw std::invalid_argument("path speed must be > 0");
  if (path.sample_rate <= 0.0)
    throw std::invalid_argument("sample rate must be > 0");
  if (calibration_duration <= 0.0 || walk_duration <= 0.0)
    throw std::invalid_argument("durations must be > 0");
  if (measurement_noise_db < 0.0)
    throw std::invalid_argument("measurement noise must be >= 0");
  if (ellipse_lambda <= 0.0)
    throw std::invalid_argument("ellipse_lambda must be > 0");
  for (const auto& src : intrinsic_sources) {
    if (src.radius <= 0.0) throw std::invalid_argument("source radius must be > 0");
    if (src.amplitude < 0.0)
      throw std::invalid_argument("source amplitude must be >= 0");
    if (src.correlation < 0.0 || src.correlation >= 1.0)
      throw std::invalid_argument("AR(1) coefficient must be in [0, 1)");
  }
  build_path_table(path);  // validates waypoints
}

Vec2 path_position(const WalkPath& path, double elapsed) {
  const PathTable table = build_path_table(path);
  return position_on_table(table, elapsed * path.speed);
}

GroundTruth generate_path(const ScenarioConfig& cfg) {
  cfg.validate();
  const PathTable table = build_path_table(cfg.path);
  const int t_cal =
      static_cast<int>(std::lround(cfg.calibration_duration * cfg.path.sample_rate));
  const int t_walk =
      static_cast<int>(std::lround(cfg.walk_duration * cfg.path.sample_rate));
  GroundTruth truth;
  truth.frame_t.reserve(t_walk);
  truth.positions.reserve(t_walk);
  for (int i = 0; i < t_walk; ++i) {
    truth.frame_t.push_back(t_cal + i);
    truth.positions.push_back(position_on_table(
        table, cfg.path.speed * static_cast<double>(i) / cfg.path.sample_rate));
  }
  return truth;
}

std::vector<int> links_touching_disc(const SensorLayout& layout,
                                     const LinkSet& links, Vec2 center,
                                     double radius) {
  std::vector<int> touched;
  for (const Link& link : links.links()) {
    const Vec2 a = layout.position_of(link.tx);
    const Vec2 b = layout.position_of(link.rx);
    if (point_segment_distance(center, a, b) < radius)
      touched.push_back(link.link_index);
  }
  return touched;
}

SimOutput simulate_rss(const ScenarioConfig& cfg, const LinkSet& links) {
  cfg.validate();
  const std::size_t L = links.size();
  const int t_cal =
      static_cast<int>(std::lround(cfg.calibration_duration * cfg.path.sample_rate));
  const int t_walk =
      static_cast<int>(std::lround(cfg.walk_duration * cfg.path.sample_rate));
  const int t_total = t_cal + t_walk;
  if (t_cal < 2 || t_walk < 2)
    throw std::invalid_argument("scenario too short to produce frames");

  SimOutput out;
  out.calibration_end = t_cal - 1;
  out.truth = generate_path(cfg);

  // Shared AR(1) series per source; the sharing across touched links is what
  // makes intrinsic motion raise variance on multiple links simultaneously.
  const std::size_t n_sources = cfg.intrinsic_sources.size();
  std::vector<std::vector<double>> source_series(n_sources);
  out.source_links.resize(n_sources);
  for (std::size_t s = 0; s < n_sources; ++s) {
    const IntrinsicSource& src = cfg.intrinsic_sources[s];
    out.source_links[s] =
        links_touching_disc(cfg.layout, links, src.center, src.radius);
    GaussianStream stream(substream_seed(cfg.seed, kSourceChannel, s));
    auto& series = source_series[s];
    series.resize(t_total);
    const double rho = src.correlation;
    const double innovation = std::sqrt(1.0 - rho * rho);
    series[0] = stream.next();  // stationary start
    for (int t = 1; t < t_total; ++t)
      series[t] = rho * series[t - 1] + innovation * stream.next();
  }
  std::vector<std::vector<std::size_t>> link_sources(L);
  for (std::size_t s = 0; s < n_sources; ++s)
    for (int l : out.source_links[s])
      link_sources[static_cast<std::size_t>(l)].push_back(s);

  out.trace.link_set = &links;
  out.trace.sample_interval_s = 1.0 / cfg.path.sample_rate;
  out.trace.gap_counts.assign(L, 0);
  out.trace.samples.assign(L, std::vector<double>(t_total, cfg.baseline_rss));

  for (std::size_t l = 0; l < L; ++l) {
    const Link& link = links.links()[l];
    const Vec2 a = cfg.layout.position_of(link.tx);
    const Vec2 b = cfg.layout.position_of(link.rx);
    const double d_ij = distance(a, b);
    const double bound = d_ij + cfg.ellipse_lambda;
    GaussianStream noise(substream_seed(cfg.seed, kNoiseChannel, l));
    GaussianStream fading(substream_seed(cfg.seed, kExtrinsicChannel, l));
    auto& series = out.trace.samples[l];
    for (int t = 0; t < t_total; ++t) {
      double rss = cfg.baseline_rss + cfg.measurement_noise_db * noise.next();
      const double g = fading.next();  // consumed every sample for determinism
      if (t >= t_cal) {
        const Vec2 person = out.truth.positions[static_cast<std::size_t>(t - t_cal)];
        if (distance(a, person) + distance(b, person) < bound)
          rss += cfg.extrinsic_gain * g;
      }
      for (std::size_t s : link_sources[l])
        rss += cfg.intrinsic_sources[s].amplitude * source_series[s][t];
      series[static_cast<std::size_t>(t)] = rss;
    }
  }
  return out;
}

ScenarioConfig reference_scenario(const std::string& name) {
  const bool calm = name == "calm";
  if (!calm && name != "windy")
    throw std::invalid_argument("unknown reference scenario: " + name);

  // 34 nodes evenly spaced on the perimeter of a 7 m x 7 m region.
  std::vector<SensorLayout::Node> nodes;
  const double side = 7.0;
  const double perimeter = 4.0 * side;
  const int n = 34;
  for (int i = 0; i < n; ++i) {
    const double s = perimeter * static_cast<double>(i) / n;
    Vec2 p;
    if (s < side)
      p = {s, 0.0};
    else if (s < 2.0 * side)
      p = {side, s - side};
    else if (s < 3.0 * side)
      p = {side - (s - 2.0 * side), side};
    else
      p = {0.0, side - (s - 3.0 * side)};
    nodes.push_back({i, p});
  }

  ScenarioConfig cfg{
      .name = name,
      .layout = SensorLayout(std::move(nodes)),
      .grid = VoxelGrid({0.0, 0.0}, 0.35, 20, 20),
      .path = {{{1.75, 1.75}, {5.25, 1.75}, {5.25, 5.25}, {1.75, 5.25}},
               0.5,
               3.0},
      .calibration_duration = 60.0,
      .walk_duration = 60.0,
      .baseline_rss = -55.0,
      .extrinsic_gain = 2.0,
      .ellipse_lambda = 0.1,
      .intrinsic_sources = {},
      .measurement_noise_db = 0.5,
      .seed = calm ? 20260801ULL : 20260802ULL,
  };
  if (!calm)
    cfg.intrinsic_sources.push_back({{6.55, 0.45}, 1.4, 3.0, 0.9});
  return cfg;
}

ScenarioConfig load_scenario_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  json j;
  in >> j;

  std::vector<SensorLayout::Node> nodes;
  for (const auto& nj : j.at("layout").at("nodes"))
    nodes.push_back({nj.at("node_id").get<int>(),
                     {nj.at("x").get<double>(), nj.at("y").get<double>()}});

  const auto& gj = j.at("grid");
  ScenarioConfig cfg{
      .name = j.value("name", ""),
      .layout = SensorLayout(std::move(nodes)),
      .grid = VoxelGrid(vec2_from(gj.at("origin")), gj.at("voxel_size").get<double>(),
                        gj.at("nx").get<int>(), gj.at("ny").get<int>()),
      .path = {},
      .calibration_duration = j.at("calibration_duration").get<double>(),
      .walk_duration = j.at("walk_duration").get<double>(),
      .baseline_rss = j.value("baseline_rss", -55.0),
      .extrinsic_gain = j.at("extrinsic_gain").get<double>(),
      .ellipse_lambda = j.value("ellipse_lambda", 0.1),
      .intrinsic_sources = {},
      .measurement_noise_db = j.at("measurement_noise_db").get<double>(),
      .seed = j.at("seed").get<std::uint64_t>(),
  };
  const auto& pj = j.at("path");
  for (const auto& wj : pj.at("waypoints")) cfg.path.waypoints.push_back(vec2_from(wj));
  cfg.path.speed = pj.at("speed").get<double>();
  cfg.path.sample_rate = pj.at("sample_rate").get<double>();
  for (const auto& sj : j.value("intrinsic_sources", json::array()))
    cfg.intrinsic_sources.push_back({vec2_from(sj.at("center")),
                                     sj.at("radius").get<double>(),
                                     sj.at("amplitude").get<double>(),
                                     sj.at("correlation").get<double>()});
  cfg.validate();
  return cfg;
}

void save_scenario_json(const ScenarioConfig& cfg, const std::string& path) {
  json nodes = json::array();
  for (const auto& n : cfg.layout.nodes())
    nodes.push_back({{"node_id", n.node_id}, {"x", n.position.x}, {"y", n.position.y}});
  json waypoints = json::array();
  for (const auto& w : cfg.path.waypoints) waypoints.push_back(vec2_json(w));
  json sources = json::array();
  for (const auto& s : cfg.intrinsic_sources)
    sources.push_back({{"center", vec2_json(s.center)},
                       {"radius", s.radius},
                       {"amplitude", s.amplitude},
                       {"correlation", s.correlation}});
  const json j{
      {"name", cfg.name},
      {"layout", {{"nodes", nodes}}},
      {"grid",
       {{"origin", vec2_json(cfg.grid.origin())},
        {"voxel_size", cfg.grid.voxel_size()},
        {"nx", cfg.grid.nx()},
        {"ny", cfg.grid.ny()}}},
      {"path",
       {{"waypoints", waypoints},
        {"speed", cfg.path.speed},
        {"sample_rate", cfg.path.sample_rate}}},
      {"calibration_duration", cfg.calibration_duration},
      {"walk_duration", cfg.walk_duration},
      {"baseline_rss", cfg.baseline_rss},
      {"extrinsic_gain", cfg.extrinsic_gain},
      {"ellipse_lambda", cfg.ellipse_lambda},
      {"intrinsic_sources", sources},
      {"measurement_noise_db", cfg.measurement_noise_db},
      {"seed", cfg.seed},
  };
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write scenario file: " + path);
  out << j.dump(2) << "\n";
}

void save_truth_csv(const GroundTruth& truth, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write truth file: " + path);
  out << "frame,x,y\n";
  char buf[96];
  for (std::size_t i = 0; i < truth.positions.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g\n", truth.frame_t[i],
                  truth.positions[i].x, truth.positions[i].y);
    out << buf;
  }
}

GroundTruth load_truth_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open truth file: " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("frame", 0) != 0)
    throw std::runtime_error("truth file missing frame,x,y header: " + path);
  GroundTruth truth;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    std::getline(row, field, ',');
    truth.frame_t.push_back(std::stoi(field));
    std::getline(row, field, ',');
    const double x = std::stod(field);
    std::getline(row, field, ',');
    truth.positions.push_back({x, std::stod(field)});
  }
  return truth;
}

}  // namespace vrt
