#include "vrt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vrt {

ErrorSeries localization_errors(const std::vector<Vec2>& estimates,
                                const GroundTruth& truth) {
  if (estimates.size() != truth.positions.size())
    throw std::invalid_argument("estimate and truth lengths differ");
  ErrorSeries series;
  series.errors.reserve(estimates.size());
  for (std::size_t i = 0; i < estimates.size(); ++i)
    series.errors.push_back(distance(estimates[i], truth.positions[i]));
  return series;
}

double rmse(const ErrorSeries& series) {
  if (series.errors.empty()) throw std::invalid_argument("empty error series");
  double acc = 0.0;
  for (double e : series.errors) acc += e * e;
  return std::sqrt(acc / static_cast<double>(series.errors.size()));
}

double error_percentile(const ErrorSeries& series, double q) {
  if (series.errors.empty()) throw std::invalid_argument("empty error series");
  if (q <= 0.0 || q > 1.0)
    throw std::invalid_argument("percentile fraction must be in (0, 1]");
  std::vector<double> sorted = series.errors;
  std::sort(sorted.begin(), sorted.end());
  const double h = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double f = h - static_cast<double>(lo);
  return sorted[lo] + f * (sorted[hi] - sorted[lo]);
}

EigenNetworkReport eigen_network_report(const EigenDecomposition& eig,
                                        const LinkSet& links,
                                        const SensorLayout& layout,
                                        double threshold_frac) {
  if (eig.u.rows() != static_cast<Eigen::Index>(links.size()))
    throw std::invalid_argument("eigendecomposition does not match link set");
  (void)layout;  // kept in the interface for endpoint annotation
  EigenNetworkReport report;
  report.scree.assign(eig.eigenvalues.data(),
                      eig.eigenvalues.data() + eig.eigenvalues.size());

  const auto u1 = eig.u.col(0);  // sign-normalized by eigen_networks
  const double max_entry = u1.maxCoeff();
  const double threshold = threshold_frac * max_entry;
  for (Eigen::Index l = 0; l < u1.size(); ++l) {
    if (u1[l] >= threshold && u1[l] > 0.0) {
      const Link& link = links.links()[static_cast<std::size_t>(l)];
      report.entries.push_back({link.link_index, link.tx, link.rx, u1[l]});
    }
  }
  std::sort(report.entries.begin(), report.entries.end(),
            [](const auto& a, const auto& b) {
              if (a.u1l != b.u1l) return a.u1l > b.u1l;
              return a.link_index < b.link_index;
            });
  return report;
}

}  // namespace vrt
