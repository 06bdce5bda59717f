#include "vrt/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vrt/kernels.hpp"

namespace vrt {

namespace {

void check_frames(const std::vector<VarianceFrame>& calibration) {
  if (calibration.size() < 2)
    throw std::invalid_argument("covariance estimation needs M >= 2 frames");
  const std::size_t L = calibration.front().y.size();
  for (const auto& frame : calibration)
    if (frame.y.size() != L)
      throw std::invalid_argument("inconsistent frame length in calibration");
}

Eigen::VectorXd frame_mean(const std::vector<VarianceFrame>& calibration) {
  const std::size_t L = calibration.front().y.size();
  std::vector<double> acc(L, 0.0);
  for (const auto& frame : calibration)
    kernels::axpy(1.0, frame.y.data(), acc.data(), L);
  Eigen::VectorXd mean(L);
  for (std::size_t i = 0; i < L; ++i)
    mean[i] = acc[i] / static_cast<double>(calibration.size());
  return mean;
}

}  // namespace

SampleCovariance sample_covariance(const std::vector<VarianceFrame>& calibration) {
  check_frames(calibration);
  const std::size_t L = calibration.front().y.size();
  const int M = static_cast<int>(calibration.size());

  SampleCovariance cov;
  cov.mean = frame_mean(calibration);
  cov.sample_count = M;

  // Accumulate deviations as rank-1 updates on the upper triangle, then
  // mirror. Symmetric, so row-major upper equals the Eigen lower triangle.
  std::vector<double> upper(L * L, 0.0);
  std::vector<double> dev(L);
  for (const auto& frame : calibration) {
    for (std::size_t i = 0; i < L; ++i) dev[i] = frame.y[i] - cov.mean[i];
    kernels::syr_upper(upper.data(), L, 1.0, dev.data());
  }
  const double scale = 1.0 / (M - 1);
  cov.matrix.resize(L, L);
  for (std::size_t r = 0; r < L; ++r)
    for (std::size_t c = r; c < L; ++c) {
      const double v = upper[r * L + c] * scale;
      cov.matrix(r, c) = v;
      cov.matrix(c, r) = v;
    }
  return cov;
}

EigenDecomposition eigen_networks(const SampleCovariance& cov) {
  const Eigen::MatrixXd& c = cov.matrix;
  if (c.rows() != c.cols())
    throw std::invalid_argument("covariance matrix must be square");
  const double scale = std::max(1.0, c.cwiseAbs().maxCoeff());
  if ((c - c.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale)
    throw std::invalid_argument("covariance matrix must be symmetric");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(c);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition failed to converge");

  const Eigen::Index n = c.rows();
  EigenDecomposition eig;
  eig.u.resize(n, n);
  eig.eigenvalues.resize(n);
  // Eigen returns ascending order; reverse to descending and clamp the
  // round-off negatives of a PSD input at zero.
  for (Eigen::Index i = 0; i < n; ++i) {
    eig.eigenvalues[i] = std::max(0.0, solver.eigenvalues()[n - 1 - i]);
    eig.u.col(i) = solver.eigenvectors().col(n - 1 - i);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index arg = 0;
    eig.u.col(i).cwiseAbs().maxCoeff(&arg);
    if (eig.u(arg, i) < 0.0) eig.u.col(i) = -eig.u.col(i);
  }
  return eig;
}

ShrinkageCovariance ledoit_wolf(const std::vector<VarianceFrame>& calibration,
                                std::optional<double> force_nu) {
  check_frames(calibration);
  const SampleCovariance sample = sample_covariance(calibration);
  const std::size_t L = sample.matrix.rows();
  const double M = static_cast<double>(sample.sample_count);

  ShrinkageCovariance shrunk;
  shrunk.mu = sample.matrix.trace() / static_cast<double>(L);

  if (force_nu) {
    shrunk.nu = std::clamp(*force_nu, 0.0, 1.0);
  } else {
    const Eigen::MatrixXd centered =
        sample.matrix - shrunk.mu * Eigen::MatrixXd::Identity(L, L);
    const double d2 = centered.squaredNorm();
    if (d2 == 0.0) {
      shrunk.nu = 1.0;
    } else {
      // (1/M^2) sum_t ||v v^T - S||_F^2 expanded as
      // ||v||^4 - 2 v^T S v + ||S||_F^2 to avoid the L x L temporaries.
      const double s_norm2 = sample.matrix.squaredNorm();
      std::vector<double> dev(L), sv(L);
      double b_bar2 = 0.0;
      for (const auto& frame : calibration) {
        for (std::size_t i = 0; i < L; ++i) dev[i] = frame.y[i] - sample.mean[i];
        // S is symmetric, so its column-major storage is a valid row-major view.
        kernels::gemv(sample.matrix.data(), L, L, dev.data(), sv.data());
        const double v2 = kernels::dot(dev.data(), dev.data(), L);
        const double vsv = kernels::dot(dev.data(), sv.data(), L);
        b_bar2 += v2 * v2 - 2.0 * vsv + s_norm2;
      }
      b_bar2 /= M * M;
      const double b2 = std::min(b_bar2, d2);
      shrunk.nu = std::clamp(b2 / d2, 0.0, 1.0);
    }
  }

  shrunk.matrix = (1.0 - shrunk.nu) * sample.matrix;
  shrunk.matrix.diagonal().array() += shrunk.nu * shrunk.mu;
  return shrunk;
}

SpatialCovariance exp_spatial_cov(const VoxelGrid& grid, double sigma_x2,
                                  double delta) {
  if (sigma_x2 <= 0.0 || delta <= 0.0)
    throw std::invalid_argument("exp_spatial_cov requires sigma_x2 > 0 and delta > 0");
  const auto& centers = grid.centers();
  const std::size_t P = centers.size();
  SpatialCovariance cov;
  cov.sigma_x2 = sigma_x2;
  cov.delta = delta;
  cov.matrix.resize(P, P);
  const double scale = sigma_x2 / delta;
  for (std::size_t i = 0; i < P; ++i) {
    cov.matrix(i, i) = scale;
    for (std::size_t j = i + 1; j < P; ++j) {
      const double v = scale * std::exp(-distance(centers[j], centers[i]) / delta);
      cov.matrix(i, j) = v;
      cov.matrix(j, i) = v;
    }
  }
  return cov;
}

}  // namespace vrt
