#include "vrt/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace vrt {

double norm(Vec2 a) { return std::hypot(a.x, a.y); }
double distance(Vec2 a, Vec2 b) { return norm(a - b); }

SensorLayout::SensorLayout(std::vector<Node> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 2)
    throw std::invalid_argument("layout needs at least 2 nodes");
  std::vector<int> ids;
  ids.reserve(nodes_.size());
  for (const Node& n : nodes_) {
    if (!std::isfinite(n.position.x) || !std::isfinite(n.position.y))
      throw std::invalid_argument("non-finite node position");
    ids.push_back(n.node_id);
  }
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
    throw std::invalid_argument("duplicate node_id in layout");
}

std::size_t SensorLayout::index_of(int node_id) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].node_id == node_id) return i;
  throw std::out_of_range("unknown node_id " + std::to_string(node_id));
}

Vec2 SensorLayout::position_of(int node_id) const {
  return nodes_[index_of(node_id)].position;
}

LinkSet::LinkSet(const SensorLayout& layout,
                 std::vector<std::pair<int, int>> pairs) {
  links_.reserve(pairs.size());
  index_.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto [tx, rx] = pairs[i];
    if (tx == rx)
      throw std::invalid_argument("link with tx == rx (" + std::to_string(tx) + ")");
    layout.index_of(tx);  // validates ids
    layout.index_of(rx);
    links_.push_back({static_cast<int>(i), tx, rx});
    index_.push_back({{tx, rx}, i});
  }
  std::sort(index_.begin(), index_.end());
  for (std::size_t i = 1; i < index_.size(); ++i)
    if (index_[i].first == index_[i - 1].first)
      throw std::invalid_argument("duplicate link pair");
}

std::size_t LinkSet::index_of(int tx, int rx) const {
  const std::pair<int, int> key{tx, rx};
  auto it = std::lower_bound(index_.begin(), index_.end(), key,
                             [](const auto& e, const auto& k) { return e.first < k; });
  if (it == index_.end() || it->first != key)
    throw std::out_of_range("link (" + std::to_string(tx) + "," +
                            std::to_string(rx) + ") not in set");
  return it->second;
}

bool LinkSet::contains(int tx, int rx) const {
  const std::pair<int, int> key{tx, rx};
  auto it = std::lower_bound(index_.begin(), index_.end(), key,
                             [](const auto& e, const auto& k) { return e.first < k; });
  return it != index_.end() && it->first == key;
}

LinkSet enumerate_links(const SensorLayout& layout, LinkMode mode,
                        const std::vector<std::pair<int, int>>& explicit_pairs) {
  if (mode == LinkMode::Explicit) return LinkSet(layout, explicit_pairs);
  std::vector<std::pair<int, int>> pairs;
  const auto& nodes = layout.nodes();
  pairs.reserve(nodes.size() * (nodes.size() - 1));
  for (const auto& tx : nodes)
    for (const auto& rx : nodes)
      if (tx.node_id != rx.node_id) pairs.push_back({tx.node_id, rx.node_id});
  return LinkSet(layout, std::move(pairs));
}

LinkGeometry link_geometry(const SensorLayout& layout, const Link& link) {
  const Vec2 a = layout.position_of(link.tx);
  const Vec2 b = layout.position_of(link.rx);
  const double d = distance(a, b);
  if (d <= 0.0)
    throw std::invalid_argument("coincident endpoints on link " +
                                std::to_string(link.link_index));
  return {d, a, b};
}

VoxelGrid::VoxelGrid(Vec2 origin, double voxel_size, int nx, int ny)
    : origin_(origin), voxel_size_(voxel_size), nx_(nx), ny_(ny) {
  if (voxel_size <= 0.0) throw std::invalid_argument("voxel_size must be > 0");
  if (nx < 1 || ny < 1) throw std::invalid_argument("grid needs nx, ny >= 1");
  centers_.reserve(static_cast<std::size_t>(nx) * ny);
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix)
      centers_.push_back({origin.x + (ix + 0.5) * voxel_size,
                          origin.y + (iy + 0.5) * voxel_size});
}

SensorLayout load_layout_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open layout file: " + path);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty layout file: " + path);
  if (line.rfind("node_id", 0) != 0)
    throw std::runtime_error("layout file missing node_id,x,y header: " + path);
  std::vector<SensorLayout::Node> nodes;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    SensorLayout::Node node{};
    if (!std::getline(row, field, ',')) continue;
    node.node_id = std::stoi(field);
    if (!std::getline(row, field, ','))
      throw std::runtime_error("malformed layout row: " + line);
    node.position.x = std::stod(field);
    if (!std::getline(row, field, ','))
      throw std::runtime_error("malformed layout row: " + line);
    node.position.y = std::stod(field);
    nodes.push_back(node);
  }
  return SensorLayout(std::move(nodes));
}

void save_layout_csv(const SensorLayout& layout, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write layout file: " + path);
  out << "node_id,x,y\n";
  char buf[96];
  for (const auto& n : layout.nodes()) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g\n", n.node_id, n.position.x,
                  n.position.y);
    out << buf;
  }
}

}  // namespace vrt
