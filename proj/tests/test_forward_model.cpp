#include "vrt/forward_model.hpp"

#include <algorithm>
#include <cmath>

#include "doctest.h"

using namespace vrt;

namespace {

SensorLayout pair_layout(Vec2 a, Vec2 b) {
  return SensorLayout({{0, a}, {1, b}});
}

}  // namespace

TEST_SUITE("forward_model") {

TEST_CASE("midpoint voxel gets phi over sqrt(d)") {
  const SensorLayout layout = pair_layout({0, 0}, {4, 0});
  const LinkSet links = enumerate_links(layout, LinkMode::AllPairs);
  // single voxel centered on the link midpoint
  const VoxelGrid grid({1.5, -0.25}, 0.5, 1, 1);
  const WeightMatrix w = build_weight_matrix(layout, links, grid, {0.1, 2.0});
  CHECK(w.at(0, 0) == doctest::Approx(2.0 / std::sqrt(4.0)));
  CHECK(w.at(1, 0) == doctest::Approx(2.0 / std::sqrt(4.0)));
}

TEST_CASE("voxel outside the ellipse gets zero") {
  const SensorLayout layout = pair_layout({0, 0}, {4, 0});
  const LinkSet links = enumerate_links(layout, LinkMode::AllPairs);
  const VoxelGrid grid({1.75, 2.75}, 0.5, 1, 1);  // 3 m off-axis
  const WeightMatrix w = build_weight_matrix(layout, links, grid, {0.1, 1.0});
  CHECK(w.at(0, 0) == 0.0);
  CHECK(w.nonzeros() == 0);
}

TEST_CASE("reciprocal links have identical rows") {
  const SensorLayout layout = pair_layout({0, 0}, {5, 1});
  const LinkSet links = enumerate_links(layout, LinkMode::AllPairs);
  const VoxelGrid grid({0, -1}, 0.4, 14, 6);
  const WeightMatrix w = build_weight_matrix(layout, links, grid, {0.3, 1.0});
  for (std::size_t p = 0; p < grid.voxel_count(); ++p)
    CHECK(w.at(0, p) == w.at(1, p));
}

TEST_CASE("rows take at most two values: zero and phi/sqrt(d)") {
  std::vector<SensorLayout::Node> nodes{
      {0, {0, 0}}, {1, {6, 0}}, {2, {6, 6}}, {3, {0, 6}}};
  const SensorLayout layout{std::move(nodes)};
  const LinkSet links = enumerate_links(layout, LinkMode::AllPairs);
  const VoxelGrid grid({0, 0}, 0.5, 12, 12);
  const WeightMatrix w = build_weight_matrix(layout, links, grid, {0.2, 1.5});
  for (const Link& link : links.links()) {
    const double expected =
        1.5 / std::sqrt(link_geometry(layout, link).length);
    const std::size_t l = static_cast<std::size_t>(link.link_index);
    for (std::size_t k = w.row_ptr()[l]; k < w.row_ptr()[l + 1]; ++k)
      CHECK(w.values()[k] == doctest::Approx(expected).epsilon(1e-15));
  }
}

TEST_CASE("enlarging lambda never removes a nonzero entry") {
  std::vector<SensorLayout::Node> nodes{
      {0, {0, 0}}, {1, {6, 0}}, {2, {3, 5}}};
  const SensorLayout layout{std::move(nodes)};
  const LinkSet links = enumerate_links(layout, LinkMode::AllPairs);
  const VoxelGrid grid({0, 0}, 0.5, 12, 10);
  const WeightMatrix narrow = build_weight_matrix(layout, links, grid, {0.1, 1.0});
  const WeightMatrix wide = build_weight_matrix(layout, links, grid, {0.8, 1.0});
  for (std::size_t l = 0; l < narrow.rows(); ++l)
    for (std::size_t k = narrow.row_ptr()[l]; k < narrow.row_ptr()[l + 1]; ++k)
      CHECK(wide.at(l, narrow.col_idx()[k]) > 0.0);
  CHECK(wide.nonzeros() >= narrow.nonzeros());
}

TEST_CASE("translation invariance is bit-for-bit") {
  const Vec2 shift{13.5, -7.25};
  std::vector<SensorLayout::Node> nodes{{0, {0, 0}}, {1, {5, 2}}, {2, {2, 4}}};
  std::vector<SensorLayout::Node> moved;
  for (auto n : nodes) moved.push_back({n.node_id, n.position + shift});
  const SensorLayout layout{std::move(nodes)};
  const SensorLayout layout2{std::move(moved)};
  const LinkSet links = enumerate_links(layout, LinkMode::AllPairs);
  const LinkSet links2 = enumerate_links(layout2, LinkMode::AllPairs);
  const WeightMatrix a = build_weight_matrix(layout, links,
                                             VoxelGrid({0, 0}, 0.5, 10, 8),
                                             {0.25, 1.0});
  const WeightMatrix b = build_weight_matrix(layout2, links2,
                                             VoxelGrid(shift, 0.5, 10, 8),
                                             {0.25, 1.0});
  REQUIRE(a.nonzeros() == b.nonzeros());
  for (std::size_t i = 0; i < a.nonzeros(); ++i) {
    CHECK(a.col_idx()[i] == b.col_idx()[i]);
    CHECK(a.values()[i] == b.values()[i]);
  }
}

TEST_CASE("coverage report") {
  const SensorLayout layout = pair_layout({0, 0}, {4, 0});
  const LinkSet links = enumerate_links(layout, LinkMode::Explicit, {{0, 1}});
  // one voxel on the segment, one far away
  const VoxelGrid grid({1.75, -0.25}, 0.5, 1, 8);
  const WeightMatrix w = build_weight_matrix(layout, links, grid, {0.1, 1.0});
  const CoverageReport report = coverage_report(w);
  CHECK(report.link_count[0] == 1);
  CHECK(report.link_count[7] == 0);
  CHECK(std::find(report.uncovered_voxels.begin(), report.uncovered_voxels.end(),
                  7) != report.uncovered_voxels.end());
}

TEST_CASE("interior voxels of an all-pairs hull are covered") {
  std::vector<SensorLayout::Node> nodes;
  for (int i = 0; i < 8; ++i) {
    const double a = 2.0 * 3.14159265358979 * i / 8;
    nodes.push_back({i, {4.0 + 3.5 * std::cos(a), 4.0 + 3.5 * std::sin(a)}});
  }
  const SensorLayout layout{std::move(nodes)};
  const LinkSet links = enumerate_links(layout, LinkMode::AllPairs);
  const VoxelGrid grid({3.0, 3.0}, 0.5, 4, 4);  // well inside the hull
  const WeightMatrix w = build_weight_matrix(layout, links, grid, {0.5, 1.0});
  const CoverageReport report = coverage_report(w);
  for (int count : report.link_count) CHECK(count >= 1);
  CHECK(report.uncovered_voxels.empty());
}

TEST_CASE("degenerate link rejected") {
  std::vector<SensorLayout::Node> nodes{{0, {1, 1}}, {1, {1, 1}}};
  const SensorLayout layout{std::move(nodes)};
  const LinkSet links = enumerate_links(layout, LinkMode::AllPairs);
  CHECK_THROWS_AS(build_weight_matrix(layout, links, VoxelGrid({0, 0}, 0.5, 4, 4),
                                      {0.1, 1.0}),
                  std::invalid_argument);
}

}  // TEST_SUITE
