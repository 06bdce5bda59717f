#include "vrt/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "vrt/kernels.hpp"

namespace vrt {

RssTrace parse_trace_csv(const std::string& path, const LinkSet& link_set,
                         double sample_interval_s) {
  if (sample_interval_s <= 0.0)
    throw std::invalid_argument("sample interval must be > 0");
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file: " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("t,", 0) != 0)
    throw std::runtime_error("trace file missing t,tx,rx,rss_dbm header: " + path);

  const std::size_t L = link_set.size();
  const double hole = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::vector<double>> samples(L);
  long prev_t = -1;
  long max_t = -1;
  bool any_row = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    any_row = true;
    std::istringstream row(line);
    std::string field;
    long t;
    int tx, rx;
    double rss;
    if (!std::getline(row, field, ',')) throw std::runtime_error("malformed trace row: " + line);
    t = std::stol(field);
    if (!std::getline(row, field, ',')) throw std::runtime_error("malformed trace row: " + line);
    tx = std::stoi(field);
    if (!std::getline(row, field, ',')) throw std::runtime_error("malformed trace row: " + line);
    rx = std::stoi(field);
    if (!std::getline(row, field, ',')) throw std::runtime_error("malformed trace row: " + line);
    rss = std::stod(field);

    if (t < 0) throw std::runtime_error("negative sample index in trace");
    if (t < prev_t)
      throw std::runtime_error("non-monotone timestamps in trace at t=" +
                               std::to_string(t));
    prev_t = t;
    max_t = std::max(max_t, t);
    const std::size_t l = link_set.index_of(tx, rx);  // throws on unknown link
    auto& series = samples[l];
    if (series.size() <= static_cast<std::size_t>(t))
      series.resize(static_cast<std::size_t>(t) + 1, hole);
    series[static_cast<std::size_t>(t)] = rss;
  }
  if (!any_row) throw std::runtime_error("empty trace file: " + path);

  const std::size_t T = static_cast<std::size_t>(max_t) + 1;
  RssTrace trace;
  trace.link_set = &link_set;
  trace.sample_interval_s = sample_interval_s;
  trace.samples.resize(L);
  trace.gap_counts.assign(L, 0);
  for (std::size_t l = 0; l < L; ++l) {
    auto& series = samples[l];
    series.resize(T, hole);
    // Hold-last fill; a leading hole takes the first observed value.
    std::size_t first = T;
    for (std::size_t t = 0; t < T; ++t)
      if (!std::isnan(series[t])) { first = t; break; }
    if (first == T)
      throw std::runtime_error("link " + std::to_string(l) +
                               " has no samples in trace");
    int gaps = 0;
    for (std::size_t t = 0; t < first; ++t) { series[t] = series[first]; ++gaps; }
    for (std::size_t t = first + 1; t < T; ++t) {
      if (std::isnan(series[t])) { series[t] = series[t - 1]; ++gaps; }
    }
    trace.gap_counts[l] = gaps;
    trace.samples[l] = std::move(series);
  }
  return trace;
}

void save_trace_csv(const RssTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trace file: " + path);
  out << "t,tx,rx,rss_dbm\n";
  const auto& links = trace.link_set->links();
  char buf[96];
  for (std::size_t t = 0; t < trace.length(); ++t) {
    for (std::size_t l = 0; l < links.size(); ++l) {
      std::snprintf(buf, sizeof(buf), "%zu,%d,%d,%.17g\n", t, links[l].tx,
                    links[l].rx, trace.samples[l][t]);
      out << buf;
    }
  }
}

std::vector<VarianceFrame> windowed_variance(const RssTrace& trace, int m) {
  if (m < 2) throw std::invalid_argument("window length m must be >= 2");
  const std::size_t T = trace.length();
  if (T < static_cast<std::size_t>(m))
    throw std::invalid_argument("trace shorter than window length");
  const std::size_t L = trace.samples.size();
  const std::size_t n_frames = T - m + 1;

  std::vector<VarianceFrame> frames(n_frames);
  for (std::size_t f = 0; f < n_frames; ++f) {
    frames[f].t = static_cast<int>(f) + m - 1;
    frames[f].y.resize(L);
  }
  for (std::size_t l = 0; l < L; ++l) {
    const double* s = trace.samples[l].data();
    for (std::size_t f = 0; f < n_frames; ++f) {
      const double* w = s + f;
      const double mean = kernels::sum(w, m) / m;
      const double var = kernels::sum_sq_dev(w, m, mean) / (m - 1);
      frames[f].y[l] = std::max(0.0, var);
    }
  }
  return frames;
}

FrameSplit split_calibration(const std::vector<VarianceFrame>& frames,
                             int calibration_end) {
  FrameSplit split;
  for (const auto& frame : frames) {
    if (frame.t <= calibration_end)
      split.calibration.push_back(frame);
    else
      split.realtime.push_back(frame);
  }
  if (split.calibration.size() < 2)
    throw std::invalid_argument("calibration split leaves M < 2 frames");
  if (split.realtime.size() < 2)
    throw std::invalid_argument("calibration split leaves < 2 realtime frames");
  return split;
}

}  // namespace vrt
