#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "se3ctl/liegroup.hpp"
#include "se3ctl/random.hpp"
#include "se3ctl/uncertainty.hpp"

namespace se3ctl {

/// Perturbation covariance of the sensor-surface state dynamics.
struct DynamicsNoise {
  Matrix6 cov = Matrix6::Zero();
};

/// sigma^2 diag(1, 1, 1, (pi/180)^2, (pi/180)^2, (pi/180)^2).
DynamicsNoise default_dynamics_noise(double sigma);

/// Belief over the sensor-surface pose X_sf.
struct FilterState {
  PoseGaussian belief;
  Pose prev_sensor_pose;
  std::size_t step_index = 0;
};

FilterState filter_init(const PoseGaussian& obs, const Pose& sensor_pose = Pose::identity());

/// Predict with T = (X_now)^-1 X_prev from sensor poses, then fuse with obs.
FilterState filter_step(const FilterState& s, const PoseGaussian& obs, const Pose& sensor_pose_now,
                        const DynamicsNoise& noise, const FuseOptions& fopt = {});

/// Same as filter_step but with the state transition given directly.
FilterState filter_step_transition(const FilterState& s, const PoseGaussian& obs,
                                   const Pose& transition, const DynamicsNoise& noise,
                                   const FuseOptions& fopt = {});

/// exp(psi^) x_now x_prev^-1 with psi ~ N(0, default_dynamics_noise(sigma_psi)).
Pose synthetic_transition(const Pose& x_prev, const Pose& x_now, double sigma_psi, Rng& rng);

struct StudyRow {
  double sigma_psi;  ///< +inf marks the unfiltered baseline
  Vector6 mae;
};

/**
 * @brief Runs the filter over a pose sequence for every sigma_psi in the grid.
 *
 * Transitions are synthesised from consecutive true poses with the row's
 * sigma_psi and the filter uses the matching dynamics noise. An infinite
 * sigma_psi bypasses the filter (output = observation). Rows follow the grid order.
 */
std::vector<StudyRow> filter_study(const std::vector<Pose>& truth,
                                   const std::vector<PoseGaussian>& observations,
                                   const std::vector<double>& sigma_psi_grid, std::uint64_t seed);

}  // namespace se3ctl
