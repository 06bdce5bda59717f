#include "vrt/geometry.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "doctest.h"

using namespace vrt;

namespace {

SensorLayout grid_layout(int n) {
  std::vector<SensorLayout::Node> nodes;
  for (int i = 0; i < n; ++i)
    nodes.push_back({i, {static_cast<double>(i), static_cast<double>(i % 3)}});
  return SensorLayout(std::move(nodes));
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("all_pairs link counts") {
  CHECK(enumerate_links(grid_layout(2), LinkMode::AllPairs).size() == 2);
  CHECK(enumerate_links(grid_layout(34), LinkMode::AllPairs).size() == 1122);
}

TEST_CASE("all_pairs ordering is tx-major") {
  const LinkSet links = enumerate_links(grid_layout(3), LinkMode::AllPairs);
  REQUIRE(links.size() == 6);
  const std::vector<std::pair<int, int>> expected{{0, 1}, {0, 2}, {1, 0},
                                                  {1, 2}, {2, 0}, {2, 1}};
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(links.links()[i].tx == expected[i].first);
    CHECK(links.links()[i].rx == expected[i].second);
    CHECK(links.links()[i].link_index == static_cast<int>(i));
  }
}

TEST_CASE("enumerate_links is deterministic") {
  const SensorLayout layout = grid_layout(6);
  const LinkSet a = enumerate_links(layout, LinkMode::AllPairs);
  const LinkSet b = enumerate_links(layout, LinkMode::AllPairs);
  REQUIRE(a.size() == b.size());
  CHECK(a.size() == 30);  // N(N-1)
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.links()[i].tx == b.links()[i].tx);
    CHECK(a.links()[i].rx == b.links()[i].rx);
  }
}

TEST_CASE("explicit link validation") {
  const SensorLayout layout = grid_layout(3);
  CHECK_THROWS_AS(enumerate_links(layout, LinkMode::Explicit, {{0, 0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(enumerate_links(layout, LinkMode::Explicit, {{0, 1}, {0, 1}}),
                  std::invalid_argument);
  CHECK_THROWS(enumerate_links(layout, LinkMode::Explicit, {{0, 9}}));
  const LinkSet ok = enumerate_links(layout, LinkMode::Explicit, {{2, 0}, {1, 2}});
  CHECK(ok.index_of(2, 0) == 0);
  CHECK(ok.index_of(1, 2) == 1);
  CHECK_FALSE(ok.contains(0, 1));
}

TEST_CASE("link_geometry distances") {
  std::vector<SensorLayout::Node> nodes{{0, {0, 0}}, {1, {3, 4}}, {2, {1, 0}}};
  const SensorLayout layout{std::move(nodes)};
  const LinkSet links = enumerate_links(layout, LinkMode::AllPairs);
  CHECK(link_geometry(layout, links.links()[links.index_of(0, 1)]).length ==
        doctest::Approx(5.0));
  CHECK(link_geometry(layout, links.links()[links.index_of(0, 2)]).length ==
        doctest::Approx(1.0));
}

TEST_CASE("coincident endpoints rejected") {
  std::vector<SensorLayout::Node> nodes{{0, {2, 2}}, {1, {2, 2}}};
  const SensorLayout layout{std::move(nodes)};
  const LinkSet links = enumerate_links(layout, LinkMode::AllPairs);
  CHECK_THROWS_AS(link_geometry(layout, links.links()[0]), std::invalid_argument);
}

TEST_CASE("layout invariants") {
  CHECK_THROWS_AS(SensorLayout({{0, {0, 0}}}), std::invalid_argument);
  CHECK_THROWS_AS(SensorLayout({{0, {0, 0}}, {0, {1, 0}}}), std::invalid_argument);
  CHECK_THROWS_AS(SensorLayout({{0, {0, 0}}, {1, {1.0 / 0.0, 0}}}),
                  std::invalid_argument);
}

TEST_CASE("voxel centers lie inside the grid bounding box") {
  const VoxelGrid grid({-1.0, 2.0}, 0.25, 7, 5);
  CHECK(grid.voxel_count() == 35);
  for (const Vec2& c : grid.centers()) {
    CHECK(c.x > -1.0);
    CHECK(c.x < -1.0 + 7 * 0.25);
    CHECK(c.y > 2.0);
    CHECK(c.y < 2.0 + 5 * 0.25);
  }
  // center formula spot check
  CHECK(grid.centers()[0].x == doctest::Approx(-1.0 + 0.125));
  CHECK(grid.centers()[7].y == doctest::Approx(2.0 + 0.375));
  CHECK_THROWS_AS(VoxelGrid({0, 0}, 0.0, 3, 3), std::invalid_argument);
}

TEST_CASE("layout csv round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "vrt_geom_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "layout.csv").string();
  const SensorLayout layout = grid_layout(5);
  save_layout_csv(layout, path);
  const SensorLayout loaded = load_layout_csv(path);
  REQUIRE(loaded.size() == layout.size());
  for (std::size_t i = 0; i < layout.size(); ++i) {
    CHECK(loaded.nodes()[i].node_id == layout.nodes()[i].node_id);
    CHECK(loaded.nodes()[i].position.x == layout.nodes()[i].position.x);
    CHECK(loaded.nodes()[i].position.y == layout.nodes()[i].position.y);
  }
  CHECK_THROWS(load_layout_csv((dir / "missing.csv").string()));
}

}  // TEST_SUITE
