#pragma once

#include <vector>

#include "se3ctl/gdnmath.hpp"
#include "se3ctl/liegroup.hpp"
#include "se3ctl/random.hpp"
#include "se3ctl/uncertainty.hpp"

namespace se3ctl::sim {

/**
 * @brief Synthetic stand-in for the pose-estimation network.
 *
 * Noise is drawn in exponential coordinates of X_sf (the network's output
 * space): xi_hat = log(X_sf) + n, n ~ N(0, diag(std^2)). The reported
 * covariance is the left-perturbation form J(xi_hat) diag(std^2) J(xi_hat)^T,
 * scaled by `cov_multiplier` to model miscalibration.
 */
struct ObservationModel {
  Vector6 std = Vector6::Constant(0.1);
  double cov_multiplier = 1.0;

  /// std = MAE * sqrt(pi/2) from the network's reported per-component MAEs.
  static ObservationModel from_mae(const Vector6& mae, double cov_multiplier = 1.0);
  /// Desk-scale default seeded from the network's published test MAEs.
  static ObservationModel desk_scale();
  void validate() const;
};

/// Published per-component test MAEs of the network (mm, rad).
Vector6 network_test_mae();

/// Observation of X_sf given the true contact pose X_fs.
PoseGaussian observe(const ObservationModel& m, const Pose& true_x_fs, Rng& rng);

/// Truth/observation sequence for the filter study.
struct StudySequence {
  std::vector<Pose> truth;  ///< X_sf
  std::vector<PoseGaussian> observations;
};

/// Independent contact poses drawn from `spec`, observed through `m`.
StudySequence make_study_sequence(std::size_t n, const ObservationModel& m, const SampleSpec& spec, Rng& rng);

}  // namespace se3ctl::sim
