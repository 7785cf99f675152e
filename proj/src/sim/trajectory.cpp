#include "se3ctl/sim/trajectory.hpp"

#include <cmath>
#include <numbers>

#include "se3ctl/errors.hpp"

namespace se3ctl::sim {

namespace {
constexpr double kPi = std::numbers::pi;
}

Twist leader_twist(double t, const Vector6& amplitude, const Vector6& phase, double period) {
  if (!(period > 0.0)) throw DomainError("leader_twist: period must be > 0");
  Twist v;
  for (int i = 0; i < 6; ++i) {
    v[i] = 2.0 * kPi * amplitude[i] / period * std::cos(2.0 * kPi * t / period + phase[i]);
  }
  return v;
}

PeriodicTrajectory PeriodicTrajectory::standard() {
  PeriodicTrajectory p;
  const double a = 25.0 * kPi / 180.0;
  p.amplitude << 75, 75, 75, a, a, a;
  p.phase << kPi / 2, 0, 0, 0, 0, 0;
  p.period = 30.0;
  return p;
}

std::vector<Segment> single_axis_script() {
  const double rot = 60.0 * kPi / 180.0;
  return {{0, -200.0, 10.0, 5.0}, {1, 200.0, 10.0, 5.0}, {2, 200.0, 10.0, 5.0},
          {3, -rot, 10.0, 5.0},   {4, rot, 10.0, 5.0},   {5, rot, 10.0, 5.0}};
}

Twist segment_twist(const std::vector<Segment>& script, double t) {
  Twist v = Twist::Zero();
  double t0 = 0.0;
  for (const Segment& s : script) {
    if (t < t0) break;
    if (t < t0 + s.duration) {
      v[s.axis] = s.amount / s.duration;
      return v;
    }
    t0 += s.duration + s.hold;
  }
  return v;
}

double script_duration(const std::vector<Segment>& script) {
  double d = 0.0;
  for (const Segment& s : script) d += s.duration + s.hold;
  return d;
}

}  // namespace se3ctl::sim
