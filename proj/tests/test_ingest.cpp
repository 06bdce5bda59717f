#include "vrt/ingest.hpp"

#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"

using namespace vrt;

namespace {

SensorLayout two_node_layout() {
  return SensorLayout({{1, {0, 0}}, {2, {1, 0}}});
}

RssTrace make_trace(const LinkSet& links, std::vector<std::vector<double>> samples) {
  RssTrace trace;
  trace.link_set = &links;
  trace.samples = std::move(samples);
  trace.gap_counts.assign(trace.samples.size(), 0);
  return trace;
}

// Independent oracle: explicit window mean, then explicit squared-deviation
// sum, straight from the definition.
double variance_oracle(const std::vector<double>& s, std::size_t t, int m) {
  double mean = 0.0;
  for (int i = 0; i < m; ++i) mean += s[t - i];
  mean /= m;
  double acc = 0.0;
  for (int i = 0; i < m; ++i) {
    const double d = mean - s[t - i];
    acc += d * d;
  }
  return acc / (m - 1);
}

std::string write_file(const std::string& name, const std::string& body) {
  const auto dir = std::filesystem::temp_directory_path() / "vrt_ingest_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / name).string();
  std::ofstream out(path);
  out << body;
  return path;
}

}  // namespace

TEST_SUITE("ingest") {

TEST_CASE("windowed variance hand examples") {
  const SensorLayout layout = two_node_layout();
  const LinkSet links = enumerate_links(layout, LinkMode::Explicit, {{1, 2}});

  SUBCASE("constant series gives all-zero frames") {
    const auto frames =
        windowed_variance(make_trace(links, {{5, 5, 5, 5, 5}}), 3);
    REQUIRE(frames.size() == 3);
    for (const auto& f : frames) CHECK(f.y[0] == 0.0);
  }
  SUBCASE("two-sample window") {
    const auto frames = windowed_variance(make_trace(links, {{0, 2}}), 2);
    REQUIRE(frames.size() == 1);
    CHECK(frames[0].t == 1);
    CHECK(frames[0].y[0] == doctest::Approx(2.0));
  }
  SUBCASE("alternating series") {
    const auto frames = windowed_variance(make_trace(links, {{1, -1, 1, -1}}), 4);
    REQUIRE(frames.size() == 1);
    CHECK(frames[0].y[0] == doctest::Approx(4.0 / 3.0));
  }
}

TEST_CASE("windowed variance matches the two-pass oracle") {
  const SensorLayout layout = two_node_layout();
  const LinkSet links = enumerate_links(layout, LinkMode::AllPairs);
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> dist(-70.0, -40.0);
  std::uniform_int_distribution<int> m_dist(2, 8);
  std::uniform_int_distribution<int> t_dist(8, 40);

  for (int trial = 0; trial < 100; ++trial) {
    const int m = m_dist(rng);
    const int t_len = t_dist(rng);
    std::vector<std::vector<double>> samples(links.size(),
                                             std::vector<double>(t_len));
    for (auto& series : samples)
      for (double& s : series) s = dist(rng);
    const auto trace = make_trace(links, samples);
    const auto frames = windowed_variance(trace, m);
    REQUIRE(frames.size() == static_cast<std::size_t>(t_len - m + 1));
    for (const auto& frame : frames)
      for (std::size_t l = 0; l < links.size(); ++l)
        CHECK(frame.y[l] ==
              doctest::Approx(variance_oracle(samples[l], frame.t, m))
                  .epsilon(0)
                  .scale(1.0)
                  .epsilon(1e-9));
  }
}

TEST_CASE("shift invariance and scale law") {
  const SensorLayout layout = two_node_layout();
  const LinkSet links = enumerate_links(layout, LinkMode::Explicit, {{1, 2}});
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dist(-5.0, 5.0);
  std::vector<double> base(30);
  for (double& s : base) s = dist(rng);

  auto shifted = base;
  for (double& s : shifted) s += 17.25;
  auto scaled = base;
  for (double& s : scaled) s *= 3.0;

  const auto f0 = windowed_variance(make_trace(links, {base}), 4);
  const auto f1 = windowed_variance(make_trace(links, {shifted}), 4);
  const auto f2 = windowed_variance(make_trace(links, {scaled}), 4);
  for (std::size_t i = 0; i < f0.size(); ++i) {
    CHECK(f1[i].y[0] == doctest::Approx(f0[i].y[0]).epsilon(1e-9));
    CHECK(f2[i].y[0] == doctest::Approx(9.0 * f0[i].y[0]).epsilon(1e-9));
  }
}

TEST_CASE("windowed variance rejects bad windows") {
  const SensorLayout layout = two_node_layout();
  const LinkSet links = enumerate_links(layout, LinkMode::Explicit, {{1, 2}});
  CHECK_THROWS_AS(windowed_variance(make_trace(links, {{1, 2, 3}}), 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(windowed_variance(make_trace(links, {{1, 2, 3}}), 4),
                  std::invalid_argument);
}

TEST_CASE("trace parsing") {
  const SensorLayout layout = two_node_layout();
  const LinkSet links = enumerate_links(layout, LinkMode::AllPairs);

  SUBCASE("dense two-link file") {
    const auto path = write_file("dense.csv",
                                 "t,tx,rx,rss_dbm\n"
                                 "0,1,2,-50\n0,2,1,-51\n"
                                 "1,1,2,-50.5\n1,2,1,-51.5\n"
                                 "2,1,2,-49\n2,2,1,-52\n");
    const RssTrace trace = parse_trace_csv(path, links);
    CHECK(trace.length() == 3);
    CHECK(trace.samples[links.index_of(1, 2)][2] == doctest::Approx(-49.0));
    CHECK(trace.gap_counts[0] == 0);
    CHECK(trace.gap_counts[1] == 0);
  }
  SUBCASE("unknown node is an error") {
    const auto path = write_file("unknown.csv", "t,tx,rx,rss_dbm\n0,1,9,-50\n0,2,1,-50\n");
    CHECK_THROWS(parse_trace_csv(path, links));
  }
  SUBCASE("missing sample held from previous value") {
    const auto path = write_file("gap.csv",
                                 "t,tx,rx,rss_dbm\n"
                                 "0,1,2,-50\n0,2,1,-60\n"
                                 "1,1,2,-51\n1,2,1,-60\n"
                                 "2,2,1,-60\n"  // link (1,2) missing at t=2
                                 "3,1,2,-53\n3,2,1,-60\n");
    const RssTrace trace = parse_trace_csv(path, links);
    const std::size_t l = links.index_of(1, 2);
    CHECK(trace.samples[l][2] == doctest::Approx(-51.0));
    CHECK(trace.gap_counts[l] == 1);
    CHECK(trace.gap_counts[links.index_of(2, 1)] == 0);
  }
  SUBCASE("non-monotone timestamps rejected") {
    const auto path = write_file("nonmono.csv",
                                 "t,tx,rx,rss_dbm\n2,1,2,-50\n1,2,1,-50\n");
    CHECK_THROWS(parse_trace_csv(path, links));
  }
  SUBCASE("empty file rejected") {
    const auto path = write_file("empty.csv", "t,tx,rx,rss_dbm\n");
    CHECK_THROWS(parse_trace_csv(path, links));
  }
}

TEST_CASE("calibration split") {
  std::vector<VarianceFrame> frames(10);
  for (int t = 0; t < 10; ++t) frames[t] = {t, {0.0, 0.0}};

  SUBCASE("count split") {
    const FrameSplit split = split_calibration(frames, 4);
    CHECK(split.calibration.size() == 5);
    CHECK(split.realtime.size() == 5);
    CHECK(split.calibration.back().t == 4);
    CHECK(split.realtime.front().t == 5);
  }
  SUBCASE("split before first frame rejected") {
    CHECK_THROWS_AS(split_calibration(frames, -1), std::invalid_argument);
  }
  SUBCASE("57 s calibration at the house scan rate yields M = 170") {
    // 173 calibration samples; m = 4 leaves frames t = 3..172.
    const int m = 4;
    const int t_cal = 173;
    std::vector<VarianceFrame> all;
    for (int t = m - 1; t < t_cal + 40; ++t) all.push_back({t, {0.0}});
    const FrameSplit split = split_calibration(all, t_cal - 1);
    CHECK(split.calibration.size() == 170);
  }
}

}  // TEST_SUITE
