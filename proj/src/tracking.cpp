#include "vrt/tracking.hpp"

#include <cmath>
#include <stdexcept>

namespace vrt {

namespace {

void check_config(const KalmanConfig& cfg) {
  if (cfg.sigma_w2 < 0.0 || cfg.sigma_v2 <= 0.0)
    throw std::invalid_argument("Kalman noise variances must be positive");
}

Eigen::Matrix4d transition() {
  Eigen::Matrix4d g = Eigen::Matrix4d::Identity();
  g(0, 2) = 1.0;
  g(1, 3) = 1.0;
  return g;
}

}  // namespace

TrackState kf_init(Vec2 first_obs, const KalmanConfig& cfg) {
  check_config(cfg);
  TrackState state;
  state.s << first_obs.x, first_obs.y, 0.0, 0.0;
  state.p_cov.diagonal() << cfg.sigma_v2, cfg.sigma_v2, cfg.sigma_w2,
      cfg.sigma_w2;
  return state;
}

TrackState kf_step(const TrackState& state, Vec2 obs, const KalmanConfig& cfg) {
  check_config(cfg);
  static const Eigen::Matrix4d g = transition();

  // Predict; process noise enters through the velocity components only.
  Eigen::Vector4d s_pred = g * state.s;
  Eigen::Matrix4d q = Eigen::Matrix4d::Zero();
  q(2, 2) = cfg.sigma_w2;
  q(3, 3) = cfg.sigma_w2;
  Eigen::Matrix4d p_pred = g * state.p_cov * g.transpose() + q;

  TrackState next;
  if (!std::isfinite(obs.x) || !std::isfinite(obs.y)) {
    next.s = s_pred;
    next.p_cov = 0.5 * (p_pred + p_pred.transpose());
    return next;
  }

  Eigen::Matrix<double, 2, 4> h = Eigen::Matrix<double, 2, 4>::Zero();
  h(0, 0) = 1.0;
  h(1, 1) = 1.0;
  const Eigen::Matrix2d r = cfg.sigma_v2 * Eigen::Matrix2d::Identity();

  const Eigen::Vector2d innovation = Eigen::Vector2d(obs.x, obs.y) - h * s_pred;
  const Eigen::Matrix2d s_innov = h * p_pred * h.transpose() + r;
  const Eigen::Matrix<double, 4, 2> gain =
      p_pred * h.transpose() * s_innov.inverse();

  next.s = s_pred + gain * innovation;
  const Eigen::Matrix4d j = Eigen::Matrix4d::Identity() - gain * h;
  next.p_cov = j * p_pred * j.transpose() + gain * r * gain.transpose();
  next.p_cov = 0.5 * (next.p_cov + next.p_cov.transpose()).eval();
  return next;
}

TrackResult track_sequence(const std::vector<Vec2>& observations,
                           const KalmanConfig& cfg) {
  if (observations.empty())
    throw std::invalid_argument("track_sequence needs at least one observation");
  TrackResult result;
  result.states.reserve(observations.size());
  result.states.push_back(kf_init(observations.front(), cfg));
  for (std::size_t i = 1; i < observations.size(); ++i) {
    const Vec2 obs = observations[i];
    if (!std::isfinite(obs.x) || !std::isfinite(obs.y))
      result.skipped_frames.push_back(static_cast<int>(i));
    result.states.push_back(kf_step(result.states.back(), obs, cfg));
  }
  return result;
}

}  // namespace vrt
