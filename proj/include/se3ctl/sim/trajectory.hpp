#pragma once

#include <vector>

#include "se3ctl/liegroup.hpp"

namespace se3ctl::sim {

/// v(t) = (2 pi b / T) .* cos(2 pi t / T + phase).
Twist leader_twist(double t, const Vector6& amplitude, const Vector6& phase, double period);

/// Periodic leader motion used in the tracking experiment (b, phase, T = 30 s).
struct PeriodicTrajectory {
  Vector6 amplitude;
  Vector6 phase;
  double period = 30.0;

  static PeriodicTrajectory standard();
};

/// Constant-velocity move of one twist component followed by a hold.
struct Segment {
  int axis = 0;          ///< 0..5, twist component
  double amount = 0.0;   ///< mm or rad
  double duration = 10.0;  ///< s spent moving
  double hold = 5.0;     ///< s at rest afterwards
};

/// Single-axis tracking script: 200 mm moves along -x, y, z, then 60 deg about -x, y, z.
std::vector<Segment> single_axis_script();

/// Body-frame velocity of the segment script at time t.
Twist segment_twist(const std::vector<Segment>& script, double t);
double script_duration(const std::vector<Segment>& script);

}  // namespace se3ctl::sim
