#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace vrt {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
double norm(Vec2 a);
double distance(Vec2 a, Vec2 b);

/// Static sensor node placement. Node ids are unique, positions finite,
/// at least 2 nodes. Immutable after construction.
class SensorLayout {
 public:
  struct Node {
    int node_id;
    Vec2 position;
  };

  explicit SensorLayout(std::vector<Node> nodes);

  const std::vector<Node>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  /// Index into nodes() for a node id; throws on unknown id.
  std::size_t index_of(int node_id) const;
  Vec2 position_of(int node_id) const;

 private:
  std::vector<Node> nodes_;
};

struct Link {
  int link_index;
  int tx;
  int rx;
};

/// Ordered directional links; link_index is 0..L-1 in list order.
class LinkSet {
 public:
  LinkSet(const SensorLayout& layout, std::vector<std::pair<int, int>> pairs);

  const std::vector<Link>& links() const { return links_; }
  std::size_t size() const { return links_.size(); }
  /// Index of a (tx, rx) pair; throws if the pair is not in the set.
  std::size_t index_of(int tx, int rx) const;
  bool contains(int tx, int rx) const;

 private:
  std::vector<Link> links_;
  std::vector<std::pair<std::pair<int, int>, std::size_t>> index_;  // sorted
};

enum class LinkMode { AllPairs, Explicit };

/// All ordered pairs (i, j), i != j, in tx-major rx-minor node order, or a
/// validated explicit list. Deterministic: equal inputs give equal indexing.
LinkSet enumerate_links(const SensorLayout& layout, LinkMode mode,
                        const std::vector<std::pair<int, int>>& explicit_pairs = {});

struct LinkGeometry {
  double length;  // d_ij, meters
  Vec2 tx_pos;
  Vec2 rx_pos;
};

/// Euclidean link geometry; rejects coincident endpoints.
LinkGeometry link_geometry(const SensorLayout& layout, const Link& link);

/// Regular 2-D voxelization of the imaging region. Voxel p = iy * nx + ix has
/// center origin + ((ix + 0.5) h, (iy + 0.5) h).
class VoxelGrid {
 public:
  VoxelGrid(Vec2 origin, double voxel_size, int nx, int ny);

  Vec2 origin() const { return origin_; }
  double voxel_size() const { return voxel_size_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  std::size_t voxel_count() const { return centers_.size(); }
  const std::vector<Vec2>& centers() const { return centers_; }

 private:
  Vec2 origin_;
  double voxel_size_;
  int nx_;
  int ny_;
  std::vector<Vec2> centers_;
};

/// Layout file: CSV with header `node_id,x,y`, coordinates in meters.
SensorLayout load_layout_csv(const std::string& path);
void save_layout_csv(const SensorLayout& layout, const std::string& path);

}  // namespace vrt
