#pragma once

#include <Eigen/Dense>
#include <vector>

#include "vrt/geometry.hpp"

namespace vrt {

struct KalmanConfig {
  double sigma_w2 = 2.0;  // process-noise variance on velocity, (m/step)^2
  double sigma_v2 = 5.0;  // measurement-noise variance, m^2
};

/// Constant-velocity track state [Px, Py, Vx, Vy] with covariance.
struct TrackState {
  Eigen::Vector4d s = Eigen::Vector4d::Zero();
  Eigen::Matrix4d p_cov = Eigen::Matrix4d::Zero();

  Vec2 position() const { return {s[0], s[1]}; }
  Vec2 velocity() const { return {s[2], s[3]}; }
};

/// First observation becomes the position, velocity starts at zero,
/// covariance diag(sigma_v2, sigma_v2, sigma_w2, sigma_w2).
TrackState kf_init(Vec2 first_obs, const KalmanConfig& cfg);

/// One predict-update step with unit time step; the update uses the
/// symmetric Joseph form. A non-finite observation runs predict only.
TrackState kf_step(const TrackState& state, Vec2 obs, const KalmanConfig& cfg);

struct TrackResult {
  std::vector<TrackState> states;     // aligned 1:1 with observations
  std::vector<int> skipped_frames;    // indices with non-finite observations
};

TrackResult track_sequence(const std::vector<Vec2>& observations,
                           const KalmanConfig& cfg);

}  // namespace vrt
