#include <Eigen/Geometry>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "se3ctl/errors.hpp"
#include "se3ctl/sim/scenario.hpp"

namespace se3ctl::sim {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

nlohmann::json num(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }
}  // namespace

std::string to_string(TaskKind k) {
  switch (k) {
    case TaskKind::Track: return "track";
    case TaskKind::Follow: return "follow";
    case TaskKind::PushSingle: return "push_single";
    case TaskKind::PushDual: return "push_dual";
  }
  return "unknown";
}

TaskKind task_from_string(std::string_view s) {
  if (s == "track") return TaskKind::Track;
  if (s == "follow") return TaskKind::Follow;
  if (s == "push_single") return TaskKind::PushSingle;
  if (s == "push_dual") return TaskKind::PushDual;
  throw ConfigError("unknown task '" + std::string(s) + "'");
}

Metrics::Metrics()
    : final_target_error_mm(kNaN),
      final_tip_distance_mm(kNaN),
      mean_depth_error_mm(kNaN),
      max_depth_error_mm(kNaN),
      mean_normal_angle_deg(kNaN),
      max_normal_angle_deg(kNaN),
      mean_pose_error_mm(kNaN),
      max_pose_error_mm(kNaN),
      mean_pose_error_deg(kNaN),
      max_pose_error_deg(kNaN),
      tracking_lag_s(kNaN),
      follower_mean_depth_error_mm(kNaN),
      follower_max_depth_error_mm(kNaN),
      min_stability_margin(kNaN),
      net_displacement_mm(kNaN) {}

std::string trajectory_csv_header() {
  return "t,arm,x,y,z,qw,qx,qy,qz,twist0,twist1,twist2,twist3,twist4,twist5,belief_cov_trace,"
         "depth,normal_angle_deg,pose_error_mm,pose_error_deg,bearing,distance";
}

void write_trajectory_csv(std::ostream& os, const TrajectoryLog& log) {
  os << trajectory_csv_header() << '\n';
  os << std::setprecision(10);
  for (const TrajectoryRecord& r : log) {
    Eigen::Quaterniond q(r.pose.rotation());
    if (q.w() < 0.0) q.coeffs() = -q.coeffs();
    const Eigen::Vector3d p = r.pose.translation();
    os << r.t << ',' << r.arm << ',' << p.x() << ',' << p.y() << ',' << p.z() << ',' << q.w() << ',' << q.x()
       << ',' << q.y() << ',' << q.z();
    for (int i = 0; i < 6; ++i) os << ',' << r.command[i];
    os << ',' << r.belief_cov_trace << ',' << r.depth << ',' << r.normal_angle_deg << ',' << r.pose_error_mm
       << ',' << r.pose_error_deg << ',' << r.bearing << ',' << r.distance << '\n';
  }
}

std::string metrics_json(const Metrics& m, int indent) {
  nlohmann::ordered_json j;
  j["task"] = m.task;
  j["status"] = m.status;
  j["settled"] = m.settled;
  j["runtime_s"] = num(m.runtime_s);
  j["steps"] = m.steps;
  j["final_target_error_mm"] = num(m.final_target_error_mm);
  j["final_tip_distance_mm"] = num(m.final_tip_distance_mm);
  j["mean_depth_error_mm"] = num(m.mean_depth_error_mm);
  j["max_depth_error_mm"] = num(m.max_depth_error_mm);
  j["mean_normal_angle_deg"] = num(m.mean_normal_angle_deg);
  j["max_normal_angle_deg"] = num(m.max_normal_angle_deg);
  j["mean_pose_error_mm"] = num(m.mean_pose_error_mm);
  j["max_pose_error_mm"] = num(m.max_pose_error_mm);
  j["mean_pose_error_deg"] = num(m.mean_pose_error_deg);
  j["max_pose_error_deg"] = num(m.max_pose_error_deg);
  j["tracking_lag_s"] = num(m.tracking_lag_s);
  j["follower_mean_depth_error_mm"] = num(m.follower_mean_depth_error_mm);
  j["follower_max_depth_error_mm"] = num(m.follower_max_depth_error_mm);
  j["min_stability_margin"] = num(m.min_stability_margin);
  j["net_displacement_mm"] = num(m.net_displacement_mm);
  return j.dump(indent);
}

}  // namespace se3ctl::sim
