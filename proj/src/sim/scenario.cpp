#include "se3ctl/sim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include "se3ctl/errors.hpp"
#include "se3ctl/filter.hpp"

namespace se3ctl::sim {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDeg = kPi / 180.0;
constexpr double kRunaway = 1e4;  // mm from the work origin

Pose rot_x(double a) { return euler_to_pose(0, 0, 0, a, 0, 0); }

double rotation_angle(const Eigen::Matrix3d& R) {
  return std::acos(std::clamp(0.5 * (R.trace() - 1.0), -1.0, 1.0));
}

void guard(const Pose& p, double t, const char* who) {
  if (!p.matrix().allFinite() || p.translation().norm() > kRunaway) {
    std::ostringstream os;
    os << who << " diverged at t = " << t << " s (pose " << p.translation().transpose() << ")";
    throw DivergenceError(os.str());
  }
}

Pose integrate(const Pose& x, const Twist& u, double dt) { return (x * exp(u * dt)).orthonormalized(); }

/// Running mean / max of a non-negative scalar.
struct Stat {
  double sum = 0.0, max = 0.0;
  long n = 0;
  void add(double v) {
    sum += v;
    max = std::max(max, v);
    ++n;
  }
  double mean() const { return n ? sum / static_cast<double>(n) : std::numeric_limits<double>::quiet_NaN(); }
  double maximum() const { return n ? max : std::numeric_limits<double>::quiet_NaN(); }
};

/// Contact -> observation -> filter chain for one arm.
class Perception {
 public:
  struct Output {
    Contact truth;
    PoseGaussian obs;
    Pose estimate;  ///< X_sf handed to the controller
    double cov_trace = 0.0;
  };

  Perception(const Scenario& s, const ContactOptions& contact)
      : tracker_(contact),
        model_(s.observation),
        noise_(default_dynamics_noise(s.sigma_phi)),
        use_filter_(s.use_filter),
        noise_free_(s.noise_free) {}

  std::optional<Output> step(const SurfaceModel& surface, const Pose& x_ws, Rng& rng) {
    const std::optional<Contact> c = tracker_.update(surface, x_ws);
    if (!c) {
      filter_.reset();
      return std::nullopt;
    }
    Output o;
    o.truth = *c;
    if (noise_free_) {
      o.obs = {c->x_fs.inverse(), Matrix6::Zero()};
      o.estimate = o.obs.mean;
      return o;
    }
    o.obs = observe(model_, c->x_fs, rng);
    if (!use_filter_) {
      o.estimate = o.obs.mean;
      o.cov_trace = o.obs.cov.trace();
      return o;
    }
    filter_ = filter_ ? filter_step(*filter_, o.obs, x_ws, noise_) : filter_init(o.obs, x_ws);
    o.estimate = filter_->belief.mean;
    o.cov_trace = filter_->belief.cov.trace();
    return o;
  }

  void reset() {
    tracker_.reset();
    filter_.reset();
  }

 private:
  ContactTracker tracker_;
  ObservationModel model_;
  DynamicsNoise noise_;
  bool use_filter_;
  bool noise_free_;
  std::optional<FilterState> filter_;
};

double normal_angle_deg(const Pose& x_ws, const Eigen::Vector3d& normal) {
  const double c = std::clamp(-x_ws.rotation().col(2).dot(normal), -1.0, 1.0);
  return std::acos(c) / kDeg;
}

TrajectoryRecord make_record(double t, int arm, const Pose& x_ws, const Twist& u, const Perception::Output& o,
                             const Pose& reference_contact) {
  TrajectoryRecord r;
  r.t = t;
  r.arm = arm;
  r.pose = x_ws;
  r.command = u;
  r.belief = o.estimate;
  r.belief_cov_trace = o.cov_trace;
  r.observation = o.obs.mean;
  r.depth = o.truth.depth;
  r.normal_angle_deg = normal_angle_deg(x_ws, o.truth.normal);
  const Pose err = o.truth.x_fs.inverse() * reference_contact.inverse();  // true X_ss'
  r.pose_error_mm = err.translation().norm();
  r.pose_error_deg = rotation_angle(err.rotation()) / kDeg;
  return r;
}

/// Feature frame of a flat face whose outward normal is the z-axis of `face`.
Pose feature_over(const Pose& face, double tip_radius) {
  return face * Pose(rot_x(kPi).rotation(), Eigen::Vector3d(0, 0, tip_radius));
}

/// Shift that best aligns the follower path with the delayed ideal path.
double estimate_lag(const std::vector<Eigen::Vector3d>& actual, const std::vector<Eigen::Vector3d>& ideal,
                    std::size_t first, double dt) {
  const std::size_t max_shift = static_cast<std::size_t>(std::lround(2.0 / dt));
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_k = 0;
  for (std::size_t k = 0; k <= max_shift && k < first + 1; ++k) {
    double sum = 0.0;
    long n = 0;
    for (std::size_t i = std::max(first, k); i < actual.size(); ++i) {
      sum += (actual[i] - ideal[i - k]).norm();
      ++n;
    }
    if (n > 0 && sum / n < best) {
      best = sum / n;
      best_k = k;
    }
  }
  return static_cast<double>(best_k) * dt;
}

std::size_t step_count(double duration, double dt) {
  return static_cast<std::size_t>(std::floor(duration / dt + 1e-9));
}

ScenarioResult run_track(const Scenario& s, Rng& rng) {
  ScenarioResult out;
  Metrics& m = out.metrics;
  const ServoConfig cfg = servo_config_from_preset(s.controller);
  const double ref_depth = s.controller.reference_euler[2];

  Pose leader = Pose::identity();
  Pose x_ws = feature_over(leader, s.contact.tip_radius) *
              euler_to_pose(Vector6(s.controller.reference_euler + s.track.initial_offset));
  Perception perception(s, s.contact);
  PidState pid = PidState::zeros(6);

  Stat pose_mm, pose_deg, depth_err, normal;
  std::vector<Eigen::Vector3d> actual, ideal;
  std::size_t first_steady = std::numeric_limits<std::size_t>::max();
  const std::size_t n = step_count(s.duration, s.dt);
  m.status = "completed";
  std::size_t k = 0;
  for (; k <= n; ++k) {
    const double t = static_cast<double>(k) * s.dt;
    const SurfaceModel plane = SurfaceModel::flat(leader);
    const auto o = perception.step(plane, x_ws, rng);
    if (!o) {
      m.status = "contact_lost";
      break;
    }
    const ServoResult sr = servo_step(cfg, pid, o->estimate, s.dt);
    pid = sr.state;
    TrajectoryRecord r = make_record(t, 0, x_ws, sr.command, *o, cfg.reference_contact);
    actual.push_back(x_ws.translation());
    ideal.push_back((o->truth.feature_frame * cfg.reference_contact.inverse()).translation());
    if (t >= s.track.steady_state_start - 1e-9) {
      first_steady = std::min(first_steady, actual.size() - 1);
      pose_mm.add(r.pose_error_mm);
      pose_deg.add(r.pose_error_deg);
      depth_err.add(std::abs(r.depth - ref_depth));
      normal.add(r.normal_angle_deg);
    }
    out.log.push_back(r);
    if (k == n) break;

    Twist v = Twist::Zero();
    switch (s.track.motion) {
      case TrackSetup::Motion::Periodic:
        v = leader_twist(t, s.track.periodic.amplitude, s.track.periodic.phase, s.track.periodic.period);
        break;
      case TrackSetup::Motion::Segments: v = segment_twist(s.track.segments, t); break;
      case TrackSetup::Motion::Static: break;
    }
    leader = integrate(leader, v, s.dt);
    x_ws = integrate(x_ws, sr.command, s.dt);
    guard(x_ws, t, "follower");
  }
  m.steps = static_cast<int>(out.log.size());
  m.runtime_s = out.log.empty() ? 0.0 : out.log.back().t;
  m.mean_pose_error_mm = pose_mm.mean();
  m.max_pose_error_mm = pose_mm.maximum();
  m.mean_pose_error_deg = pose_deg.mean();
  m.max_pose_error_deg = pose_deg.maximum();
  m.mean_depth_error_mm = depth_err.mean();
  m.max_depth_error_mm = depth_err.maximum();
  m.mean_normal_angle_deg = normal.mean();
  m.max_normal_angle_deg = normal.maximum();
  if (first_steady < actual.size()) m.tracking_lag_s = estimate_lag(actual, ideal, first_steady, s.dt);
  m.settled = m.status == "completed";
  return out;
}

/// Surface and start pose for one follow path.
struct FollowStart {
  SurfaceModel surface;
  Pose feature;  ///< X_wf at the start point
};

FollowStart follow_start(const Scenario& s) {
  const FollowSetup& f = s.follow;
  const double tip = s.contact.tip_radius;
  switch (f.surface) {
    case SurfaceModel::Kind::Flat:
      return {SurfaceModel::flat(), feature_over(Pose::identity(), tip)};
    case SurfaceModel::Kind::Ramp: {
      const SurfaceModel ramp = SurfaceModel::ramp(f.radius > 0 ? f.radius : 300.0, f.extent_deg);
      // local face frame at arc angle a: z along the outward normal, x along the cylinder axis
      const Pose face = rot_x(-f.ramp_start_deg * kDeg) * Pose::from_translation({0, 0, ramp.radius});
      return {ramp, feature_over(face, tip)};
    }
    case SurfaceModel::Kind::Hemisphere: {
      const SurfaceModel hemi = SurfaceModel::hemisphere(f.radius > 0 ? f.radius : 60.0);
      return {hemi, feature_over(Pose::from_translation({0, 0, hemi.radius}), tip)};
    }
  }
  throw ConfigError("follow: unknown surface");
}

ScenarioResult run_follow(const Scenario& s, Rng& rng) {
  ScenarioResult out;
  Metrics& m = out.metrics;
  const FollowStart start = follow_start(s);
  const double ref_depth = s.controller.reference_euler[2];
  Stat depth_err, normal;
  m.status = "completed";
  double t_offset = 0.0;
  const std::size_t n = step_count(s.duration, s.dt);

  for (double dir_deg : s.follow.directions_deg) {
    ServoConfig cfg = servo_config_from_preset(s.controller);
    const double th = dir_deg * kDeg;
    cfg.feedforward[0] += s.follow.speed * std::cos(th);
    cfg.feedforward[1] += s.follow.speed * std::sin(th);

    Pose x_ws = start.feature * euler_to_pose(s.controller.reference_euler);
    Perception perception(s, s.contact);
    PidState pid = PidState::zeros(6);
    double t = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
      t = static_cast<double>(k) * s.dt;
      if (start.surface.kind == SurfaceModel::Kind::Hemisphere) {
        const Eigen::Vector3d c = start.surface.frame.inverse() * x_ws.translation();
        if (std::acos(std::clamp(c.normalized().z(), -1.0, 1.0)) > s.follow.max_polar_deg * kDeg) break;
      }
      const auto o = perception.step(start.surface, x_ws, rng);
      if (!o) {
        m.status = "contact_lost";
        break;
      }
      const ServoResult sr = servo_step(cfg, pid, o->estimate, s.dt);
      pid = sr.state;
      TrajectoryRecord r = make_record(t_offset + t, 0, x_ws, sr.command, *o, cfg.reference_contact);
      if (t >= s.transient - 1e-9) {
        depth_err.add(std::abs(r.depth - ref_depth));
        normal.add(r.normal_angle_deg);
      }
      out.log.push_back(r);
      x_ws = integrate(x_ws, sr.command, s.dt);
      guard(x_ws, t_offset + t, "follower");
    }
    t_offset += t + s.dt;
  }
  m.steps = static_cast<int>(out.log.size());
  m.runtime_s = out.log.empty() ? 0.0 : out.log.back().t;
  m.mean_depth_error_mm = depth_err.mean();
  m.max_depth_error_mm = depth_err.maximum();
  m.mean_normal_angle_deg = normal.mean();
  m.max_normal_angle_deg = normal.maximum();
  m.settled = m.status == "completed";
  return out;
}

/**
 * Pushing world model. The object's body frame B sits at the leader contact
 * point with z_B along the pushing direction and x_B vertical; the leader
 * face is z_B = 0 and the opposite face z_B = W. Each step the object
 * advances by the leader's penetration beyond push_depth, moves with the
 * leader's lateral motion and turns by (alpha/r0) per mm of it.
 */
ScenarioResult run_push(const Scenario& s, Rng& rng) {
  ScenarioResult out;
  Metrics& m = out.metrics;
  const PushSetup& ps = s.push;
  const bool dual = s.task == TaskKind::PushDual;
  const double tip = s.contact.tip_radius;
  const double gap = tip - ps.push_depth;  // tip centre to face when pushing
  const double width = ps.object.depth;
  const double turn_rate = ps.object.alpha / ps.object.r0;

  // sensor axis along +y of the work frame, x up
  Eigen::Matrix3d R0;
  R0 << Eigen::Vector3d::UnitX(), -Eigen::Vector3d::UnitZ(), Eigen::Vector3d::UnitY();
  Pose x_ws(R0, Eigen::Vector3d(0.0, ps.start.x(), ps.start.y()));
  Pose body(R0, x_ws * Eigen::Vector3d(0, 0, gap));
  const Pose body0 = body;
  Pose x_wf = body * Pose(rot_x(kPi).rotation(), Eigen::Vector3d(0, 0, width + gap));

  PushConfig cfg;
  cfg.servo = servo_config_from_preset(s.controller);
  cfg.bearing_pid = s.bearing.pid;
  cfg.switch_off_radius = ps.switch_off_radius;
  cfg.termination_radius = ps.termination_radius;
  cfg.bearing_in_degrees = ps.bearing_in_degrees;
  const Eigen::Vector3d target_w(0.0, ps.target.x(), ps.target.y());
  cfg.target_in_work = Pose::from_translation(target_w);
  cfg.validate();
  const ServoConfig fcfg = dual ? servo_config_from_preset(s.follower) : ServoConfig{};
  const double f_ref_depth = s.follower.reference_euler[2];

  Perception leader(s, s.contact);
  Perception follower(s, s.follower_contact);
  PidState servo_state = PidState::zeros(6);
  PidState bearing_state = PidState::zeros(1);
  PidState f_state = PidState::zeros(6);

  Stat depth_err, normal, f_depth;
  double margin = 1.0;
  double min_margin = 1.0;
  double last_tip = std::numeric_limits<double>::quiet_NaN();
  m.status = "timeout";
  const std::size_t n = step_count(s.duration, s.dt);
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) * s.dt;
    const SurfaceModel leader_face = SurfaceModel::flat(body * rot_x(kPi));
    const SurfaceModel far_face = SurfaceModel::flat(body * Pose::from_translation({0, 0, width}));

    const auto o = leader.step(leader_face, x_ws, rng);
    if (!o) {
      m.status = "contact_lost";
      break;
    }
    const PushResult pr = push_step(cfg, servo_state, bearing_state, o->estimate, x_ws, s.dt);
    servo_state = pr.servo_state;
    bearing_state = pr.bearing_state;
    last_tip = pr.tip_distance;
    TrajectoryRecord r = make_record(t, 0, x_ws, pr.command, *o, cfg.servo.reference_contact);
    r.bearing = pr.bearing;
    r.distance = pr.distance;
    depth_err.add(std::abs(r.depth - ps.push_depth));
    normal.add(r.normal_angle_deg);
    out.log.push_back(r);

    Twist fu = Twist::Zero();
    bool supported = false;
    if (dual) {
      const auto fo = follower.step(far_face, x_wf, rng);
      if (fo) {
        const ServoResult fr = servo_step(fcfg, f_state, fo->estimate, s.dt);
        f_state = fr.state;
        fu = fr.command;
        TrajectoryRecord fr_rec = make_record(t, 1, x_wf, fu, *fo, fcfg.reference_contact);
        const double e = std::abs(fr_rec.depth - f_ref_depth);
        if (t >= s.transient - 1e-9) f_depth.add(e);
        supported = e <= ps.stability_tolerance;
        out.log.push_back(fr_rec);
      } else {
        f_state = PidState::zeros(6);
        if (t >= s.transient - 1e-9) f_depth.add(std::numeric_limits<double>::infinity());
      }
    }
    if (ps.tall) {
      margin = std::clamp(margin + (supported ? ps.stability_recovery : -ps.stability_decay) * s.dt, 0.0, 1.0);
      min_margin = std::min(min_margin, margin);
      if (margin <= 0.0) {
        m.status = "toppled";
        break;
      }
    }
    if (pr.status == PushStatus::Terminated) {
      m.status = "terminated";
      break;
    }
    if (k == n) break;

    const Eigen::Vector3d c_before = body.inverse() * x_ws.translation();
    x_ws = integrate(x_ws, pr.command, s.dt);
    guard(x_ws, t, "leader");
    const Eigen::Vector3d c_after = body.inverse() * x_ws.translation();
    const double depth = tip + c_after.z();
    if (depth > 0.0) {
      const double dl = c_after.y() - c_before.y();
      const double advance = std::max(0.0, depth - ps.push_depth);
      body = body * Pose(rot_x(turn_rate * dl).rotation(), Eigen::Vector3d(0, dl, advance));
    }
    if (dual) {
      x_wf = integrate(x_wf, fu, s.dt);
      guard(x_wf, t, "follower");
    }
  }
  m.steps = static_cast<int>(out.log.size());
  m.runtime_s = out.log.empty() ? 0.0 : out.log.back().t;
  m.final_target_error_mm = std::abs((body.inverse() * target_w).y());
  m.final_tip_distance_mm = last_tip;
  m.mean_depth_error_mm = depth_err.mean();
  m.max_depth_error_mm = depth_err.maximum();
  m.mean_normal_angle_deg = normal.mean();
  m.max_normal_angle_deg = normal.maximum();
  if (dual) {
    m.follower_mean_depth_error_mm = f_depth.mean();
    m.follower_max_depth_error_mm = f_depth.maximum();
  }
  if (ps.tall) m.min_stability_margin = min_margin;
  m.net_displacement_mm = (body.translation() - body0.translation()).norm();
  m.settled = m.status == "terminated";
  return out;
}

void check_preset(const ControllerPreset& p, int size, const char* role) {
  if (p.pid.size() != size) {
    throw ConfigError(std::string(role) + " preset '" + p.name + "' must have " + std::to_string(size) +
                      " channels");
  }
  p.pid.validate();
}

}  // namespace

Scenario Scenario::defaults(TaskKind k) {
  Scenario s;
  s.task = k;
  ContactOptions slip;
  slip.slip_radius = 2.0;
  slip.slip_spin = 2.0 * kDeg;
  switch (k) {
    case TaskKind::Track:
      s.controller = controller_preset("tracking");
      s.duration = 90.0;
      break;
    case TaskKind::Follow:
      s.controller = controller_preset("surface_follow");
      s.contact = slip;
      s.duration = 20.0;
      break;
    case TaskKind::PushSingle:
      s.controller = controller_preset("push_pid1");
      s.bearing = controller_preset("push_pid2_single");
      s.duration = 120.0;
      break;
    case TaskKind::PushDual:
      s.controller = controller_preset("push_pid1");
      s.bearing = controller_preset("push_pid2_dual");
      s.follower = controller_preset("stabiliser");
      s.follower_contact = slip;
      s.duration = 120.0;
      break;
  }
  return s;
}

void Scenario::validate() const {
  if (!(dt > 0.0 && std::isfinite(dt))) throw ConfigError("dt must be a positive number");
  if (!(duration >= dt && std::isfinite(duration))) throw ConfigError("duration must be >= dt");
  if (!noise_free) observation.validate();
  if (!(sigma_phi > 0.0)) throw ConfigError("sigma_phi must be > 0");
  if (!(transient >= 0.0)) throw ConfigError("transient must be >= 0");
  for (const ContactOptions* c : {&contact, &follower_contact}) {
    if (!(c->tip_radius > 0.0 && c->max_depth > 0.0 && c->max_depth < c->tip_radius)) {
      throw ConfigError("contact: need 0 < max_depth < tip_radius");
    }
  }
  check_preset(controller, 6, "controller");
  switch (task) {
    case TaskKind::Track:
      if (!(track.steady_state_start >= 0.0)) throw ConfigError("track.steady_state_start must be >= 0");
      if (track.motion == TrackSetup::Motion::Periodic && !(track.periodic.period > 0.0)) {
        throw ConfigError("track.period must be > 0");
      }
      for (const Segment& seg : track.segments) {
        if (seg.axis < 0 || seg.axis > 5 || !(seg.duration > 0.0) || !(seg.hold >= 0.0)) {
          throw ConfigError("track.segments: axis in 0..5, duration > 0, hold >= 0");
        }
      }
      break;
    case TaskKind::Follow:
      if (follow.directions_deg.empty()) throw ConfigError("follow.directions_deg must not be empty");
      if (!(follow.speed >= 0.0)) throw ConfigError("follow.speed must be >= 0");
      if (!(follow.radius >= 0.0)) throw ConfigError("follow.radius must be >= 0");
      if (follow.surface == SurfaceModel::Kind::Ramp &&
          std::abs(follow.ramp_start_deg) > 0.5 * follow.extent_deg) {
        throw ConfigError("follow.ramp_start_deg lies outside the ramp");
      }
      break;
    case TaskKind::PushDual:
      check_preset(follower, 6, "follower");
      [[fallthrough]];
    case TaskKind::PushSingle: {
      check_preset(bearing, 1, "bearing");
      PushedObject probe;
      probe.alpha = push.object.alpha;
      probe.r0 = push.object.r0;
      try {
        probe.validate();
      } catch (const DomainError& e) {
        throw ConfigError(std::string("push.object: ") + e.what());
      }
      if (!(push.object.depth > 0.0)) throw ConfigError("push.object depth must be > 0");
      if (!(push.push_depth > 0.0 && push.push_depth < contact.max_depth)) {
        throw ConfigError("push.push_depth must lie inside the contact envelope");
      }
      if (!(push.termination_radius > 0.0 && push.switch_off_radius >= 0.0)) {
        throw ConfigError("push: termination_radius > 0 and switch_off_radius >= 0 required");
      }
      if (!(push.stability_tolerance > 0.0 && push.stability_decay >= 0.0 && push.stability_recovery >= 0.0)) {
        throw ConfigError("push: stability parameters must be non-negative");
      }
      break;
    }
  }
}

ScenarioResult run_scenario(const Scenario& s, Rng& rng) {
  s.validate();
  ScenarioResult r;
  switch (s.task) {
    case TaskKind::Track: r = run_track(s, rng); break;
    case TaskKind::Follow: r = run_follow(s, rng); break;
    case TaskKind::PushSingle:
    case TaskKind::PushDual: r = run_push(s, rng); break;
  }
  r.metrics.task = to_string(s.task);
  return r;
}

}  // namespace se3ctl::sim
