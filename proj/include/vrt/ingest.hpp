#pragma once

#include <string>
#include <vector>

#include "vrt/geometry.hpp"

namespace vrt {

/// Dense per-link RSS series in dBm, every link holding exactly T samples.
struct RssTrace {
  const LinkSet* link_set = nullptr;
  std::vector<std::vector<double>> samples;  // [link][t], dBm
  double sample_interval_s = 1.0;
  std::vector<int> gap_counts;  // per-link count of held (missing) samples

  std::size_t length() const { return samples.empty() ? 0 : samples[0].size(); }
};

/// One time step of windowed RSS variance over all L links (dB^2).
struct VarianceFrame {
  int t = 0;                // sample index of the window's newest sample
  std::vector<double> y;    // length L, entries >= 0
};

struct FrameSplit {
  std::vector<VarianceFrame> calibration;  // Y_c, M frames
  std::vector<VarianceFrame> realtime;     // Y_r
};

/// Trace file: CSV with header `t,tx,rx,rss_dbm`; `t` a non-negative integer
/// sample index, rows sorted by t. Missing samples are filled by holding the
/// last value (counted in gap_counts); a leading gap holds the first value
/// backwards.
RssTrace parse_trace_csv(const std::string& path, const LinkSet& link_set,
                         double sample_interval_s = 1.0);

void save_trace_csv(const RssTrace& trace, const std::string& path);

/// Sliding-window variance with stride 1: frame t (t = m-1 .. T-1) holds
/// y_l = 1/(m-1) * sum_{i=0..m-1} (mean - s_{l,t-i})^2. Output length T-m+1.
std::vector<VarianceFrame> windowed_variance(const RssTrace& trace, int m);

/// Frames with t <= calibration_end go to calibration, the rest to realtime.
/// Both sides must keep at least 2 frames.
FrameSplit split_calibration(const std::vector<VarianceFrame>& frames,
                             int calibration_end);

}  // namespace vrt
