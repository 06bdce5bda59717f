#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "vrt/geometry.hpp"
#include "vrt/ingest.hpp"

namespace vrt {

/// Unbiased L x L sample covariance of calibration variance frames.
struct SampleCovariance {
  Eigen::MatrixXd matrix;   // symmetric PSD
  Eigen::VectorXd mean;     // mu_c
  int sample_count = 0;     // M
};

/// Orthonormal eigenpairs of the calibration covariance, eigenvalues sorted
/// descending and clamped at zero. Column signs are fixed so each column's
/// largest-magnitude entry is positive.
struct EigenDecomposition {
  Eigen::MatrixXd u;          // L x L, columns u_1..u_L
  Eigen::VectorXd eigenvalues;
};

/// nu * mu * I + (1 - nu) * C*, invertible for nu > 0 even when M < L.
struct ShrinkageCovariance {
  Eigen::MatrixXd matrix;
  double nu = 0.0;
  double mu = 0.0;
};

/// P x P exponentially-decaying motion prior with entries
/// (sigma_x^2 / delta) * exp(-dist / delta).
struct SpatialCovariance {
  Eigen::MatrixXd matrix;
  double sigma_x2 = 0.0;
  double delta = 0.0;
};

SampleCovariance sample_covariance(const std::vector<VarianceFrame>& calibration);

EigenDecomposition eigen_networks(const SampleCovariance& cov);

/// Shrinkage intensity follows the Ledoit-Wolf optimal formulas with the
/// sample covariance as C*; force_nu bypasses the estimate (test hook).
ShrinkageCovariance ledoit_wolf(const std::vector<VarianceFrame>& calibration,
                                std::optional<double> force_nu = std::nullopt);

SpatialCovariance exp_spatial_cov(const VoxelGrid& grid, double sigma_x2,
                                  double delta);

}  // namespace vrt
