#include "se3ctl/filter.hpp"

#include <cmath>
#include <numbers>

#include "se3ctl/errors.hpp"

namespace se3ctl {

DynamicsNoise default_dynamics_noise(double sigma) {
  if (!(sigma > 0.0)) throw DomainError("default_dynamics_noise: sigma must be > 0");
  const double d = std::numbers::pi / 180.0;
  const double s2 = sigma * sigma;
  Vector6 diag;
  diag << s2, s2, s2, s2 * d * d, s2 * d * d, s2 * d * d;
  return {diag.asDiagonal()};
}

FilterState filter_init(const PoseGaussian& obs, const Pose& sensor_pose) {
  return {obs, sensor_pose, 0};
}

FilterState filter_step(const FilterState& s, const PoseGaussian& obs, const Pose& sensor_pose_now,
                        const DynamicsNoise& noise, const FuseOptions& fopt) {
  const Pose T = sensor_pose_now.inverse() * s.prev_sensor_pose;
  FilterState next = filter_step_transition(s, obs, T, noise, fopt);
  next.prev_sensor_pose = sensor_pose_now;
  return next;
}

FilterState filter_step_transition(const FilterState& s, const PoseGaussian& obs,
                                   const Pose& transition, const DynamicsNoise& noise,
                                   const FuseOptions& fopt) {
  const PoseGaussian predicted = transform(s.belief, transition, noise.cov);
  FilterState next = s;
  next.belief = fuse_detailed(obs, predicted, fopt).result;
  next.step_index = s.step_index + 1;
  return next;
}

Pose synthetic_transition(const Pose& x_prev, const Pose& x_now, double sigma_psi, Rng& rng) {
  if (sigma_psi < 0.0) throw DomainError("synthetic_transition: sigma_psi must be >= 0");
  const Pose delta = x_now * x_prev.inverse();
  if (sigma_psi == 0.0) return delta;
  const Vector6 sd = default_dynamics_noise(sigma_psi).cov.diagonal().cwiseSqrt();
  const Twist psi = sd.cwiseProduct(standard_normal6(rng));
  return exp(psi) * delta;
}

std::vector<StudyRow> filter_study(const std::vector<Pose>& truth,
                                   const std::vector<PoseGaussian>& observations,
                                   const std::vector<double>& sigma_psi_grid, std::uint64_t seed) {
  if (truth.size() != observations.size()) {
    throw ShapeError("filter_study: truth and observation sequences differ in length");
  }
  if (truth.size() < 100) throw DomainError("filter_study: sequence length must be >= 100");

  std::vector<StudyRow> rows;
  for (std::size_t g = 0; g < sigma_psi_grid.size(); ++g) {
    const double sp = sigma_psi_grid[g];
    Vector6 abs_sum = Vector6::Zero();
    const auto accumulate = [&](std::size_t k, const Pose& est) {
      abs_sum += (log(est) - log(truth[k])).cwiseAbs();
    };
    if (std::isinf(sp)) {
      for (std::size_t k = 0; k < truth.size(); ++k) accumulate(k, observations[k].mean);
    } else {
      Rng rng(seed + 7919 * (g + 1));
      const DynamicsNoise noise = default_dynamics_noise(sp);
      FilterState st = filter_init(observations[0]);
      accumulate(0, st.belief.mean);
      for (std::size_t k = 1; k < truth.size(); ++k) {
        const Pose T = synthetic_transition(truth[k - 1], truth[k], sp, rng);
        st = filter_step_transition(st, observations[k], T, noise);
        accumulate(k, st.belief.mean);
      }
    }
    rows.push_back({sp, abs_sum / static_cast<double>(truth.size())});
  }
  return rows;
}

}  // namespace se3ctl
