#pragma once

#include <Eigen/Core>
#include <vector>

#include "se3ctl/liegroup.hpp"
#include "se3ctl/random.hpp"

namespace se3ctl {

/// N x 6 table of exponential-coordinate labels or predictions, one row per sample.
using PoseTable = Eigen::Matrix<double, Eigen::Dynamic, 6, Eigen::RowMajor>;

struct SoftboundParams {
  double x_min = 1e-6;
  double x_max = 1e6;
};

/// Means and inverse standard deviations predicted for one sample.
struct HeteroPrediction {
  Vector6 mu = Vector6::Zero();
  Vector6 inv_sigma = Vector6::Ones();
};

struct SampleSpec {
  double r_max = 5.0;      ///< mm
  double z_min = 0.5;      ///< mm
  double z_max = 6.0;      ///< mm
  double phi_max = 25.0;   ///< deg
  double gamma_min = -5.0; ///< deg
  double gamma_max = 5.0;  ///< deg

  void validate() const;
};

/// max(0, x) + log1p(exp(-|x|)).
double softplus_stable(double x);
/// Stable softbound; strictly inside (x_min, x_max) for finite x.
double softbound(double x, const SoftboundParams& p);
/// x_min + softplus(x - x_min) - softplus(x - x_max), evaluated naively.
double softbound_naive(double x, const SoftboundParams& p);

/// (1/N) sum_i sum_j alpha_j (label - pred)^2.
double weighted_mse(const PoseTable& labels, const PoseTable& preds, const Vector6& alpha);
Vector6 default_mse_weights();
Vector6 mae_per_component(const PoseTable& labels, const PoseTable& preds);
/// (M/2) ln 2pi + (1/2N) sum sum [(s^-1 e)^2 - 2 ln s^-1], M = 6.
double mean_nll(const PoseTable& labels, const std::vector<HeteroPrediction>& preds);

/// Draws an extrinsic-xyz Euler contact pose (x, y, z, alpha, beta, gamma), mm and rad.
Vector6 sample_contact_pose(const SampleSpec& spec, Rng& rng);
/// Deterministic core of sample_contact_pose for unit-interval inputs.
Vector6 contact_pose_from_unit(const SampleSpec& spec, double r_unit, double theta, double z,
                               double phi_unit, double cap_theta, double gamma);

/// Euler X_fs -> X_sf = X_fs^-1 -> log.
Twist label_pipeline(const Vector6& euler_fs);

}  // namespace se3ctl
