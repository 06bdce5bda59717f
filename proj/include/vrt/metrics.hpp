#pragma once

#include <string>
#include <vector>

#include "vrt/covariance.hpp"
#include "vrt/geometry.hpp"
#include "vrt/simulator.hpp"

namespace vrt {

/// Per-frame localization error in meters, aligned with ground-truth frames.
struct ErrorSeries {
  std::vector<double> errors;
  std::string estimator;
  std::string scenario_id;
};

ErrorSeries localization_errors(const std::vector<Vec2>& estimates,
                                const GroundTruth& truth);

/// Square root of the mean squared error.
double rmse(const ErrorSeries& series);

/// Empirical quantile with linear interpolation between order statistics;
/// q = 0.97 is the headline robustness metric.
double error_percentile(const ErrorSeries& series, double q);

struct EigenNetworkEntry {
  int link_index;
  int tx;
  int rx;
  double u1l;
};

/// Links whose first eigen-network weight exceeds threshold_frac of the
/// maximum entry (sign-normalized), sorted descending, plus the scree data.
struct EigenNetworkReport {
  std::vector<EigenNetworkEntry> entries;
  std::vector<double> scree;  // eigenvalues, descending
};

EigenNetworkReport eigen_network_report(const EigenDecomposition& eig,
                                        const LinkSet& links,
                                        const SensorLayout& layout,
                                        double threshold_frac = 0.30);

struct SweepResult {
  std::string parameter;        // k | sigma_x2 | sigma_v2 | alpha
  std::vector<double> values;
  std::vector<double> rmse;     // one per value
};

}  // namespace vrt
