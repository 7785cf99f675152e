#include <string>
#include <vector>

#include "se3ctl/control.hpp"
#include "se3ctl/errors.hpp"

namespace se3ctl {

namespace {

Eigen::VectorXd v6(double a, double b, double c, double d, double e, double f) {
  Eigen::VectorXd v(6);
  v << a, b, c, d, e, f;
  return v;
}

PidConfig mimo(const Eigen::VectorXd& kp, const Eigen::VectorXd& ki, const Eigen::VectorXd& kd) {
  PidConfig c = PidConfig::zeros(6);
  c.kp = kp;
  c.ki = ki;
  c.kd = kd;
  return c;
}

PidConfig bearing(double ki) {
  PidConfig c = PidConfig::zeros(1);
  c.kp[0] = 0.9;
  c.ki[0] = ki;
  c.kd[0] = 0.9;
  c.set_integral_clip(-10.0, 10.0);
  c.set_output_clip(-15.0, 15.0);
  return c;
}

ControllerPreset tracking() {
  ControllerPreset p{"tracking",
                     mimo(v6(5, 5, 5, 2, 2, 0), v6(0.5, 0.5, 0.5, 0.2, 0.2, 0.2),
                          v6(0.5, 0.5, 0.5, 0.2, 0.2, 0.2))};
  // Integral clipping is not used in the tracking table.
  p.reference_euler << 0, 0, 6, 0, 0, 0;
  return p;
}

ControllerPreset surface_follow() {
  ControllerPreset p{"surface_follow",
                     mimo(v6(0, 0, 2, 2, 2, 0), v6(0, 0, 0.1, 0.1, 0.1, 0), v6(0, 0, 0.05, 0.05, 0.05, 0))};
  p.pid.set_integral_clip(-25.0, 25.0);
  p.reference_euler << 0, 0, 3, 0, 0, 0;
  return p;
}

ControllerPreset push_pid1(const char* name, double x_ref) {
  ControllerPreset p{name, mimo(v6(1, 0, 0, 1, 0, 0), v6(0.1, 0, 0, 0.1, 0, 0), v6(0.1, 0, 0, 0.1, 0, 0))};
  p.pid.set_integral_clip(-25.0, 25.0);
  p.reference_euler << x_ref, 0, 0, 0, 0, 0;
  p.feedforward << 0, 0, 10, 0, 0, 0;
  return p;
}

ControllerPreset stabiliser(const char* name, double x_ref) {
  ControllerPreset p{name, mimo(v6(5, 0, 5, 1, 0, 0), v6(0.5, 0, 0.5, 0.1, 0, 0), v6(0.5, 0, 0.5, 0.1, 0, 0))};
  p.pid.set_integral_clip(-200.0, 200.0);
  p.reference_euler << x_ref, 0, 3, 0, 0, 0;
  return p;
}

}  // namespace

std::vector<std::string> controller_preset_names() {
  return {"tracking",         "surface_follow", "push_pid1",       "push_pid2_single",
          "push_pid2_dual",   "stabiliser",     "stabiliser_tall", "push_tall"};
}

ControllerPreset controller_preset(std::string_view name) {
  if (name == "tracking") return tracking();
  if (name == "surface_follow") return surface_follow();
  if (name == "push_pid1") return push_pid1("push_pid1", 0.0);
  if (name == "push_tall") return push_pid1("push_tall", 0.5);
  if (name == "push_pid2_single") return {"push_pid2_single", bearing(0.3)};
  if (name == "push_pid2_dual") return {"push_pid2_dual", bearing(0.5)};
  if (name == "stabiliser") return stabiliser("stabiliser", 0.0);
  if (name == "stabiliser_tall") return stabiliser("stabiliser_tall", -0.5);
  throw ConfigError("unknown controller preset '" + std::string(name) + "'");
}

}  // namespace se3ctl
