#pragma once

#include <Eigen/Core>
#include <string>
#include <string_view>
#include <vector>

#include "se3ctl/liegroup.hpp"

namespace se3ctl {

/**
 * @brief Diagonal PID gains and clip limits for an n-channel loop.
 *
 * n = 6 for the MIMO tangent-space controllers, n = 1 for the SISO bearing loop.
 * Unbounded clips are stored as +-infinity.
 */
struct PidConfig {
  Eigen::VectorXd kp, ki, kd;
  Eigen::VectorXd integral_lo, integral_hi;
  Eigen::VectorXd output_lo, output_hi;
  double ewma_decay = 0.5;

  static PidConfig zeros(int n);
  int size() const { return static_cast<int>(kp.size()); }
  void set_integral_clip(double lo, double hi);
  void set_output_clip(double lo, double hi);
  /// Throws DomainError on negative gains, clip intervals excluding 0, or bad decay.
  void validate() const;
};

struct PidState {
  Eigen::VectorXd integral;
  Eigen::VectorXd smoothed_error;
  Eigen::VectorXd prev_smoothed_error;
  bool initialized = false;

  static PidState zeros(int n);
};

struct PidResult {
  Eigen::VectorXd u;
  PidState state;
};

/**
 * @brief One backward-Euler PID update with feedforward.
 *
 * P and I act on the raw error, D on the EWMA-smoothed error. On the first
 * call the smoothed error is seeded with the error itself and D is zero.
 */
PidResult pid_step(const PidConfig& cfg, const PidState& state, const Eigen::VectorXd& feedforward,
                   const Eigen::VectorXd& error, double dt);

/// x^-1 x_ref (error in the local frame of x).
Pose pose_error_local(const Pose& x, const Pose& x_ref);
/// x_ref x^-1 (error in the global frame).
Pose pose_error_global(const Pose& x, const Pose& x_ref);
Twist tangent_error_local(const Pose& x, const Pose& x_ref);
Twist tangent_error_global(const Pose& x, const Pose& x_ref);

struct ServoConfig {
  Pose reference_contact;  ///< X_s'f
  Twist feedforward = Twist::Zero();  ///< reference velocity in the reference sensor frame
  PidConfig pid = PidConfig::zeros(6);

  /// Reference given as the contact pose X_fs' in extrinsic-xyz Euler form.
  static Pose reference_from_euler(const Vector6& euler_fs);
};

struct ServoResult {
  Twist command;  ///< end-effector twist in the current sensor frame
  PidState state;
  Pose error_pose;  ///< X_ss'
};

/// X_ss' = X_sf X_s'f^-1, u = PID(log X_ss') + Ad(X_ss') v.
ServoResult servo_step(const ServoConfig& cfg, const PidState& pid, const Pose& observed_contact,
                       double dt);

struct PushConfig {
  ServoConfig servo;
  PidConfig bearing_pid = PidConfig::zeros(1);
  double switch_off_radius = 120.0;  ///< mm
  double termination_radius = 20.0;  ///< mm
  Pose target_in_work;               ///< X_wt
  /// Bearing error handed to the SISO loop in degrees (see README).
  bool bearing_in_degrees = true;

  void validate() const;
};

enum class PushStatus { Running, Terminated };

struct PushResult {
  Twist command;
  PidState servo_state;
  PidState bearing_state;
  PushStatus status = PushStatus::Running;
  Pose error_pose;            ///< X_ss'
  double bearing = 0.0;       ///< theta_s' (rad)
  double distance = 0.0;      ///< r_s' (mm)
  double tip_distance = 0.0;  ///< tip-centre distance to target (mm), used for termination
  bool aligning = false;      ///< target alignment active this step
};

PushResult push_step(const PushConfig& cfg, const PidState& servo_state, const PidState& bearing_state,
                     const Pose& observed_contact, const Pose& sensor_in_work, double dt);

/// Named controller configuration from the parameter tables.
struct ControllerPreset {
  std::string name;
  PidConfig pid;
  Vector6 reference_euler = Vector6::Zero();  ///< contact pose X_fs' (Euler); unused for SISO
  Twist feedforward = Twist::Zero();
};

ControllerPreset controller_preset(std::string_view name);
std::vector<std::string> controller_preset_names();
ServoConfig servo_config_from_preset(const ControllerPreset& p);

}  // namespace se3ctl
