#include "se3ctl/control.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "se3ctl/errors.hpp"

namespace se3ctl {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

PidConfig PidConfig::zeros(int n) {
  PidConfig c;
  c.kp = c.ki = c.kd = Eigen::VectorXd::Zero(n);
  c.integral_lo = c.output_lo = Eigen::VectorXd::Constant(n, -kInf);
  c.integral_hi = c.output_hi = Eigen::VectorXd::Constant(n, kInf);
  return c;
}

void PidConfig::set_integral_clip(double lo, double hi) {
  integral_lo = Eigen::VectorXd::Constant(size(), lo);
  integral_hi = Eigen::VectorXd::Constant(size(), hi);
}

void PidConfig::set_output_clip(double lo, double hi) {
  output_lo = Eigen::VectorXd::Constant(size(), lo);
  output_hi = Eigen::VectorXd::Constant(size(), hi);
}

void PidConfig::validate() const {
  const int n = size();
  if (ki.size() != n || kd.size() != n || integral_lo.size() != n || integral_hi.size() != n ||
      output_lo.size() != n || output_hi.size() != n) {
    throw DomainError("PidConfig: inconsistent channel counts");
  }
  if ((kp.array() < 0).any() || (ki.array() < 0).any() || (kd.array() < 0).any()) {
    throw DomainError("PidConfig: gains must be non-negative");
  }
  if ((integral_lo.array() > 0).any() || (integral_hi.array() < 0).any() ||
      (output_lo.array() > 0).any() || (output_hi.array() < 0).any()) {
    throw DomainError("PidConfig: clip intervals must contain 0");
  }
  if (!(ewma_decay >= 0.0 && ewma_decay < 1.0)) {
    throw DomainError("PidConfig: ewma_decay must be in [0, 1)");
  }
}

PidState PidState::zeros(int n) {
  PidState s;
  s.integral = s.smoothed_error = s.prev_smoothed_error = Eigen::VectorXd::Zero(n);
  return s;
}

PidResult pid_step(const PidConfig& cfg, const PidState& state, const Eigen::VectorXd& feedforward,
                   const Eigen::VectorXd& error, double dt) {
  if (!(dt > 0.0)) throw DomainError("pid_step: dt must be > 0");
  const int n = cfg.size();
  if (error.size() != n || feedforward.size() != n || state.integral.size() != n) {
    throw DomainError("pid_step: channel count mismatch");
  }
  PidState s = state;
  s.integral = (s.integral + error * dt).cwiseMax(cfg.integral_lo).cwiseMin(cfg.integral_hi);

  Eigen::VectorXd derivative = Eigen::VectorXd::Zero(n);
  if (!s.initialized) {
    s.smoothed_error = error;
    s.prev_smoothed_error = error;
    s.initialized = true;
  } else {
    s.prev_smoothed_error = s.smoothed_error;
    s.smoothed_error = cfg.ewma_decay * s.prev_smoothed_error + (1.0 - cfg.ewma_decay) * error;
    derivative = (s.smoothed_error - s.prev_smoothed_error) / dt;
  }

  Eigen::VectorXd u = feedforward + cfg.kp.cwiseProduct(error) + cfg.ki.cwiseProduct(s.integral) +
                      cfg.kd.cwiseProduct(derivative);
  u = u.cwiseMax(cfg.output_lo).cwiseMin(cfg.output_hi);
  return {u, s};
}

Pose pose_error_local(const Pose& x, const Pose& x_ref) { return x.inverse() * x_ref; }
Pose pose_error_global(const Pose& x, const Pose& x_ref) { return x_ref * x.inverse(); }
Twist tangent_error_local(const Pose& x, const Pose& x_ref) { return log(pose_error_local(x, x_ref)); }
Twist tangent_error_global(const Pose& x, const Pose& x_ref) {
  return log(pose_error_global(x, x_ref));
}

Pose ServoConfig::reference_from_euler(const Vector6& euler_fs) {
  return euler_to_pose(euler_fs).inverse();
}

ServoResult servo_step(const ServoConfig& cfg, const PidState& pid, const Pose& observed_contact,
                       double dt) {
  const Pose x_ss = observed_contact * cfg.reference_contact.inverse();
  const Twist e = log(x_ss);
  const PidResult r = pid_step(cfg.pid, pid, Eigen::VectorXd::Zero(6), e, dt);
  const Twist u = r.u + adjoint(x_ss) * cfg.feedforward;
  return {u, r.state, x_ss};
}

void PushConfig::validate() const {
  if (!(termination_radius > 0.0 && switch_off_radius > termination_radius)) {
    throw DomainError("PushConfig: need switch_off_radius > termination_radius > 0");
  }
  if (bearing_pid.size() != 1) throw DomainError("PushConfig: bearing PID must be single-channel");
  servo.pid.validate();
  bearing_pid.validate();
}

PushResult push_step(const PushConfig& cfg, const PidState& servo_state, const PidState& bearing_state,
                     const Pose& observed_contact, const Pose& sensor_in_work, double dt) {
  const ServoResult sr = servo_step(cfg.servo, servo_state, observed_contact, dt);
  PushResult out;
  out.servo_state = sr.state;
  out.bearing_state = bearing_state;
  out.error_pose = sr.error_pose;

  const Pose x_st = sensor_in_work.inverse() * cfg.target_in_work;
  const Pose x_rt = sr.error_pose.inverse() * x_st;  // X_s't
  const double y = x_rt.translation().y();
  const double z = x_rt.translation().z();
  out.bearing = std::atan2(y, z);
  out.distance = std::hypot(y, z);
  out.tip_distance = std::hypot(x_st.translation().y(), x_st.translation().z());

  Twist align = Twist::Zero();
  if (out.distance >= cfg.switch_off_radius) {
    const double scale = cfg.bearing_in_degrees ? 180.0 / std::numbers::pi : 1.0;
    Eigen::VectorXd err(1);
    err[0] = -out.bearing * scale;
    const PidResult br = pid_step(cfg.bearing_pid, bearing_state, Eigen::VectorXd::Zero(1), err, dt);
    out.bearing_state = br.state;
    align[1] = br.u[0];
    out.aligning = true;
  }
  out.command = sr.command + adjoint(sr.error_pose) * align;
  out.status = out.tip_distance < cfg.termination_radius ? PushStatus::Terminated : PushStatus::Running;
  return out;
}

ServoConfig servo_config_from_preset(const ControllerPreset& p) {
  ServoConfig c;
  c.reference_contact = ServoConfig::reference_from_euler(p.reference_euler);
  c.feedforward = p.feedforward;
  c.pid = p.pid;
  return c;
}

}  // namespace se3ctl
