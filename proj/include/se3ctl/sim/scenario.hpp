#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "se3ctl/control.hpp"
#include "se3ctl/random.hpp"
#include "se3ctl/sim/observation.hpp"
#include "se3ctl/sim/pushing.hpp"
#include "se3ctl/sim/surface.hpp"
#include "se3ctl/sim/trajectory.hpp"

namespace se3ctl::sim {

enum class TaskKind { Track, Follow, PushSingle, PushDual };

std::string to_string(TaskKind k);
TaskKind task_from_string(std::string_view s);

struct TrackSetup {
  enum class Motion { Periodic, Segments, Static };
  Motion motion = Motion::Periodic;
  PeriodicTrajectory periodic = PeriodicTrajectory::standard();
  std::vector<Segment> segments = single_axis_script();
  /// Start of the steady-state window (s); errors before it are transient.
  double steady_state_start = 30.0;
  /// Initial follower offset from the reference contact pose (Euler, applied to X_fs).
  Vector6 initial_offset = Vector6::Zero();
};

struct FollowSetup {
  SurfaceModel::Kind surface = SurfaceModel::Kind::Flat;
  double radius = 0.0;        ///< mm; 0 selects the surface default
  double extent_deg = 60.0;   ///< ramp span
  double speed = 10.0;        ///< mm/s tangential feedforward
  /// Feedforward directions in the reference sensor xy-plane (deg); one path each.
  std::vector<double> directions_deg = {90.0};
  double ramp_start_deg = 25.0;    ///< start position on the ramp arc (paths run toward -y)
  double max_polar_deg = 60.0;     ///< hemisphere paths stop beyond this polar angle
};

struct PushSetup {
  ObjectPreset object = object_preset("square");
  Eigen::Vector2d start{-250.0, 100.0};  ///< sensor tip centre (work y, z), mm
  Eigen::Vector2d target{0.0, 375.0};    ///< work (y, z), mm
  double push_depth = 3.0;               ///< contact depth at which the object starts to move
  double switch_off_radius = 120.0;
  double termination_radius = 20.0;
  bool bearing_in_degrees = true;
  bool tall = false;
  double stability_tolerance = 1.5;  ///< mm of follower depth error tolerated
  double stability_decay = 0.5;      ///< margin lost per second without support
  double stability_recovery = 0.25;  ///< margin regained per second with support
};

/// Declarative description of one simulated task.
struct Scenario {
  TaskKind task = TaskKind::Track;
  double dt = 1.0 / 30.0;
  double duration = 90.0;  ///< s (per path for follow)
  std::uint64_t seed = 0;

  ObservationModel observation = ObservationModel::desk_scale();
  bool noise_free = false;  ///< perfect perception: no observation noise, no filter
  bool use_filter = true;
  double sigma_phi = 0.5;

  ControllerPreset controller;  ///< servo / pusher (PID1)
  ControllerPreset follower;    ///< stabiliser (push_dual)
  ControllerPreset bearing;     ///< SISO target alignment (PID2)

  ContactOptions contact;
  ContactOptions follower_contact;
  double transient = 2.0;  ///< s excluded from follow / follower statistics

  TrackSetup track;
  FollowSetup follow;
  PushSetup push;

  /// Defaults for the given task, with the matching controller presets.
  static Scenario defaults(TaskKind k);
  void validate() const;
};

struct TrajectoryRecord {
  double t = 0.0;
  int arm = 0;
  Pose pose;            ///< end-effector (sensor) pose in the world
  Twist command = Twist::Zero();
  Pose belief;          ///< filtered X_sf
  double belief_cov_trace = 0.0;
  Pose observation;     ///< raw observed X_sf
  double depth = 0.0;   ///< true contact depth (mm)
  double normal_angle_deg = 0.0;
  double pose_error_mm = 0.0;   ///< |translation of true X_ss'|
  double pose_error_deg = 0.0;  ///< rotation angle of true X_ss'
  double bearing = 0.0;         ///< rad (push)
  double distance = 0.0;        ///< mm (push: r_s')
};

using TrajectoryLog = std::vector<TrajectoryRecord>;

struct Metrics {
  std::string task;
  std::string status;  ///< completed | terminated | timeout | contact_lost | toppled
  bool settled = false;
  double runtime_s = 0.0;  ///< simulated time
  int steps = 0;
  double final_target_error_mm;
  double final_tip_distance_mm;
  double mean_depth_error_mm;
  double max_depth_error_mm;
  double mean_normal_angle_deg;
  double max_normal_angle_deg;
  double mean_pose_error_mm;
  double max_pose_error_mm;
  double mean_pose_error_deg;
  double max_pose_error_deg;
  double tracking_lag_s;
  double follower_mean_depth_error_mm;
  double follower_max_depth_error_mm;
  double min_stability_margin;
  double net_displacement_mm;

  Metrics();
};

struct ScenarioResult {
  TrajectoryLog log;
  Metrics metrics;
};

/// Runs the closed loop; throws DivergenceError on NaN or runaway poses.
ScenarioResult run_scenario(const Scenario& s, Rng& rng);

/// CSV serialisation of the log (stable column order).
std::string trajectory_csv_header();
void write_trajectory_csv(std::ostream& os, const TrajectoryLog& log);
/// JSON serialisation of metrics; non-applicable values become null.
std::string metrics_json(const Metrics& m, int indent = 2);

}  // namespace se3ctl::sim
