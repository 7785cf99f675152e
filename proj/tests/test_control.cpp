#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "se3ctl/control.hpp"
#include "se3ctl/errors.hpp"

using namespace se3ctl;

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::VectorXd v6(double a, double b, double c, double d, double e, double f) {
  Eigen::VectorXd v(6);
  v << a, b, c, d, e, f;
  return v;
}

Eigen::VectorXd v1(double a) { return Eigen::VectorXd::Constant(1, a); }

void expect_vec(const Eigen::VectorXd& got, const Eigen::VectorXd& want, double tol) {
  ASSERT_EQ(got.size(), want.size());
  for (Eigen::Index i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], tol) << "component " << i;
}

// Push configuration whose servo error is zero when the observed contact equals the reference.
PushConfig push_config() {
  PushConfig c;
  c.servo = servo_config_from_preset(controller_preset("push_pid1"));
  c.bearing_pid = controller_preset("push_pid2_single").pid;
  c.target_in_work = Pose();
  return c;
}

// Sensor pose in work coordinates that puts the target at (0, y, z) in the sensor frame.
Pose sensor_seeing_target_at(double y, double z) { return Pose(Eigen::Matrix3d::Identity(), {0, -y, -z}); }

}  // namespace

TEST(PoseError, LocalAndGlobalForms) {
  Rng rng(1);
  for (int i = 0; i < 50; ++i) {
    const Pose x = exp(oracle::random_twist(rng, 10, 1));
    const Pose r = exp(oracle::random_twist(rng, 10, 1));
    EXPECT_TRUE(pose_error_local(x, x).is_approx(Pose(), 1e-12));
    const Pose el = pose_error_local(x, r), eg = pose_error_global(x, r);
    EXPECT_TRUE(eg.is_approx(x * el * x.inverse(), 1e-9));
    EXPECT_TRUE((x * oracle::exp_pose(tangent_error_local(x, r))).is_approx(r, 1e-9));
    EXPECT_TRUE((oracle::exp_pose(tangent_error_global(x, r)) * x).is_approx(r, 1e-9));
    EXPECT_LT((tangent_error_global(x, r) - adjoint(x) * tangent_error_local(x, r)).norm(), 1e-9);
  }
}

TEST(PoseError, PureTranslation) {
  const Pose x;
  const Pose r(Eigen::Matrix3d::Identity(), {2.5, 0, 0});
  const Twist expect = make_twist({2.5, 0, 0}, {0, 0, 0});
  EXPECT_LT((tangent_error_local(x, r) - expect).norm(), 1e-15);
  EXPECT_LT((tangent_error_global(x, r) - expect).norm(), 1e-15);
  EXPECT_LT(tangent_error_local(r, r).norm(), 1e-15);
}

TEST(Pid, ZeroErrorPassesFeedforwardExactly) {
  for (const char* name : {"tracking", "surface_follow", "push_pid1", "stabiliser"}) {
    const PidConfig cfg = controller_preset(name).pid;
    const Eigen::VectorXd ff = v6(1.5, -2, 10, 0.01, -0.02, 0.3);
    PidState s = PidState::zeros(6);
    for (int k = 0; k < 5; ++k) {
      const PidResult r = pid_step(cfg, s, ff, Eigen::VectorXd::Zero(6), 1.0 / 30);
      EXPECT_EQ(r.u, ff) << name;
      s = r.state;
    }
  }
}

TEST(Pid, ProportionalOnly) {
  PidConfig cfg = PidConfig::zeros(6);
  cfg.kp = v6(5, 5, 5, 2, 2, 0);
  const PidResult r =
      pid_step(cfg, PidState::zeros(6), Eigen::VectorXd::Zero(6), v6(1, 1, 1, 0.1, 0.1, 0.1), 0.1);
  expect_vec(r.u, v6(5, 5, 5, 0.2, 0.2, 0), 1e-15);
}

TEST(Pid, ProportionalLinearity) {
  Rng rng(2);
  PidConfig cfg = PidConfig::zeros(6);
  cfg.kp = v6(5, 5, 5, 2, 2, 0);
  for (int i = 0; i < 100; ++i) {
    const Eigen::VectorXd e = oracle::random_twist(rng, 10, 1);
    const double k = uniform(rng, -100, 100);
    const Eigen::VectorXd z = Eigen::VectorXd::Zero(6);
    const Eigen::VectorXd a = pid_step(cfg, PidState::zeros(6), z, k * e, 0.1).u;
    const Eigen::VectorXd b = k * pid_step(cfg, PidState::zeros(6), z, e, 0.1).u;
    EXPECT_LT((a - b).norm(), 1e-12 * (1 + b.norm()));
  }
}

TEST(Pid, IntegralSaturatesAndHolds) {
  PidConfig cfg = PidConfig::zeros(6);
  cfg.ki = Eigen::VectorXd::Constant(6, 0.1);
  cfg.set_integral_clip(-2, 2);
  PidState s = PidState::zeros(6);
  const Eigen::VectorXd e = v6(1, 0, 0, 0, 0, 0);
  for (int k = 1; k <= 30; ++k) {
    s = pid_step(cfg, s, Eigen::VectorXd::Zero(6), e, 1.0).state;
    EXPECT_DOUBLE_EQ(s.integral[0], std::min<double>(k, 2.0));
  }
  // Unwinds immediately once the error reverses.
  s = pid_step(cfg, s, Eigen::VectorXd::Zero(6), -e, 1.0).state;
  EXPECT_DOUBLE_EQ(s.integral[0], 1.0);
}

TEST(Pid, AntiWindupUnderAdversarialInput) {
  Rng rng(3);
  PidConfig cfg = controller_preset("surface_follow").pid;
  PidState s = PidState::zeros(6);
  for (int k = 0; k < 2000; ++k) {
    Eigen::VectorXd e(6);
    for (int i = 0; i < 6; ++i) e[i] = uniform(rng, -1, 1) * std::pow(10.0, uniform(rng, -3, 6));
    s = pid_step(cfg, s, Eigen::VectorXd::Zero(6), e, uniform(rng, 1e-3, 1.0)).state;
    EXPECT_TRUE((s.integral.array() >= -25.0).all() && (s.integral.array() <= 25.0).all());
  }
}

TEST(Pid, OutputClipAndEwmaDerivative) {
  PidConfig cfg = PidConfig::zeros(1);
  cfg.kd = v1(1.0);
  cfg.ewma_decay = 0.75;
  PidState s = PidState::zeros(1);
  PidResult r = pid_step(cfg, s, v1(0), v1(4), 0.5);
  EXPECT_EQ(r.u[0], 0.0);  // no derivative on the first call
  r = pid_step(cfg, r.state, v1(0), v1(8), 0.5);
  // smoothed 0.75*4 + 0.25*8 = 5, derivative (5 - 4) / 0.5
  EXPECT_DOUBLE_EQ(r.state.smoothed_error[0], 5.0);
  EXPECT_DOUBLE_EQ(r.u[0], 2.0);
  cfg.set_output_clip(-1.5, 1.5);
  r = pid_step(cfg, r.state, v1(0), v1(20), 0.5);
  EXPECT_DOUBLE_EQ(r.u[0], 1.5);
}

TEST(Pid, InvalidInputs) {
  PidConfig cfg = PidConfig::zeros(6);
  EXPECT_THROW(pid_step(cfg, PidState::zeros(6), Eigen::VectorXd::Zero(6), Eigen::VectorXd::Zero(6), 0.0),
               DomainError);
  EXPECT_THROW(pid_step(cfg, PidState::zeros(6), Eigen::VectorXd::Zero(6), Eigen::VectorXd::Zero(3), 0.1),
               DomainError);
  cfg.kp[2] = -1;
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg = PidConfig::zeros(6);
  cfg.set_integral_clip(1, 2);
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg = PidConfig::zeros(6);
  cfg.ewma_decay = 1.0;
  EXPECT_THROW(cfg.validate(), DomainError);
}

TEST(Presets, TrackingHandSteps) {
  const PidConfig cfg = controller_preset("tracking").pid;
  const Eigen::VectorXd e = v6(1, 1, 1, 0.1, 0.1, 0.1);
  const Eigen::VectorXd z = Eigen::VectorXd::Zero(6);
  PidResult r = pid_step(cfg, PidState::zeros(6), z, e, 0.1);
  // Kp e + Ki (e dt); derivative is zero on the first call.
  expect_vec(r.u, v6(5.05, 5.05, 5.05, 0.202, 0.202, 0.002), 1e-12);
  r = pid_step(cfg, r.state, z, 2 * e, 0.1);
  // integral 0.3 e, smoothed 1.5 e, derivative 0.5 e / 0.1 = 5 e
  expect_vec(r.u, v6(12.65, 12.65, 12.65, 0.506, 0.506, 0.106), 1e-12);
}

TEST(Presets, SurfaceFollowHandStep) {
  const PidConfig cfg = controller_preset("surface_follow").pid;
  const PidResult r = pid_step(cfg, PidState::zeros(6), Eigen::VectorXd::Zero(6), v6(3, 3, 3, 0.1, 0.1, 0.1), 0.5);
  // Kp = (0,0,2,2,2,0), Ki = (0,0,0.1,0.1,0.1,0), integral = 0.5 e
  expect_vec(r.u, v6(0, 0, 6.15, 0.205, 0.205, 0), 1e-12);
}

TEST(Presets, PushAndStabiliserHandSteps) {
  const Eigen::VectorXd e = v6(2, 2, 2, 0.2, 0.2, 0.2);
  const Eigen::VectorXd z = Eigen::VectorXd::Zero(6);
  const ControllerPreset p1 = controller_preset("push_pid1");
  expect_vec(pid_step(p1.pid, PidState::zeros(6), p1.feedforward, e, 1.0).u, v6(2.2, 0, 10, 0.22, 0, 0), 1e-12);
  const ControllerPreset st = controller_preset("stabiliser");
  expect_vec(pid_step(st.pid, PidState::zeros(6), z, e, 1.0).u, v6(11, 0, 11, 0.22, 0, 0), 1e-12);
  EXPECT_EQ(controller_preset("push_tall").reference_euler, v6(0.5, 0, 0, 0, 0, 0));
  EXPECT_EQ(controller_preset("stabiliser_tall").reference_euler, v6(-0.5, 0, 3, 0, 0, 0));
  EXPECT_EQ(controller_preset("stabiliser").pid.integral_hi[0], 200.0);
}

TEST(Presets, BearingLoops) {
  const PidConfig single = controller_preset("push_pid2_single").pid;
  const PidConfig dual = controller_preset("push_pid2_dual").pid;
  ASSERT_EQ(single.size(), 1);
  EXPECT_DOUBLE_EQ(pid_step(single, PidState::zeros(1), v1(0), v1(10), 0.1).u[0], 9.3);
  EXPECT_DOUBLE_EQ(pid_step(dual, PidState::zeros(1), v1(0), v1(10), 0.1).u[0], 9.5);
  EXPECT_DOUBLE_EQ(pid_step(single, PidState::zeros(1), v1(0), v1(30), 0.1).u[0], 15.0);
  EXPECT_DOUBLE_EQ(pid_step(single, PidState::zeros(1), v1(0), v1(-30), 0.1).u[0], -15.0);
}

TEST(Presets, NamesRoundTripAndUnknownRejected) {
  for (const std::string& n : controller_preset_names()) {
    const ControllerPreset p = controller_preset(n);
    EXPECT_EQ(p.name, n);
    EXPECT_NO_THROW(p.pid.validate());
  }
  EXPECT_THROW(controller_preset("nope"), ConfigError);
}

TEST(Servo, ZeroErrorGivesFeedforward) {
  ServoConfig cfg = servo_config_from_preset(controller_preset("surface_follow"));
  const Pose ref = cfg.reference_contact;
  ServoResult r = servo_step(cfg, PidState::zeros(6), ref, 1.0 / 30);
  EXPECT_LT(r.command.norm(), 1e-12);
  cfg.feedforward = make_twist({0, 10, 0}, {0, 0, 0});
  r = servo_step(cfg, PidState::zeros(6), ref, 1.0 / 30);
  EXPECT_LT((r.command - cfg.feedforward).norm(), 1e-12);
  EXPECT_TRUE(r.error_pose.is_approx(Pose(), 1e-12));
}

TEST(Servo, DepthOffsetHandTrace) {
  const ServoConfig cfg = servo_config_from_preset(controller_preset("tracking"));
  // Reference contact depth is 6 mm; the sensor sits 3 mm shallower.
  const Pose observed = euler_to_pose(0, 0, 3, 0, 0, 0).inverse();
  const double dt = 0.1;
  PidState s = PidState::zeros(6);
  double integral = 0, smoothed = 0, expected = 0;
  for (int k = 0; k < 4; ++k) {
    const ServoResult r = servo_step(cfg, s, observed, dt);
    const double e = 3.0;
    integral += e * dt;
    const double prev = smoothed;
    smoothed = k == 0 ? e : 0.5 * smoothed + 0.5 * e;
    const double d = k == 0 ? 0.0 : (smoothed - prev) / dt;
    expected = 5 * e + 0.5 * integral + 0.5 * d;
    EXPECT_NEAR(r.command[2], expected, 1e-12);
    EXPECT_NEAR(r.command[0], 0.0, 1e-12);
    EXPECT_NEAR(r.command.tail<3>().norm(), 0.0, 1e-12);
    s = r.state;
  }
  EXPECT_NEAR(expected, 15.6, 1e-12);
}

TEST(Servo, FeedforwardMappedThroughAdjoint) {
  ServoConfig cfg;
  cfg.reference_contact = Pose();
  cfg.feedforward = make_twist({0, 10, 0}, {0, 0, 0});
  const Pose observed = exp(make_twist({1, 2, 3}, {0.1, 0.2, 0.3}));
  const ServoResult r = servo_step(cfg, PidState::zeros(6), observed, 0.1);
  EXPECT_LT((r.command - adjoint(observed) * cfg.feedforward).norm(), 1e-12);
}

TEST(Push, TargetDeadAheadAddsNothing) {
  const PushConfig cfg = push_config();
  const Pose obs = cfg.servo.reference_contact;
  const PushResult r =
      push_step(cfg, PidState::zeros(6), PidState::zeros(1), obs, sensor_seeing_target_at(0, 300), 0.1);
  const ServoResult s = servo_step(cfg.servo, PidState::zeros(6), obs, 0.1);
  EXPECT_NEAR(r.bearing, 0.0, 1e-12);
  EXPECT_NEAR(r.distance, 300.0, 1e-9);
  EXPECT_TRUE(r.aligning);
  EXPECT_LT((r.command - s.command).norm(), 1e-12);
  EXPECT_EQ(r.status, PushStatus::Running);
}

TEST(Push, BearingGeometryAndSwitchOff) {
  const PushConfig cfg = push_config();
  const Pose obs = cfg.servo.reference_contact;
  const PushResult near =
      push_step(cfg, PidState::zeros(6), PidState::zeros(1), obs, sensor_seeing_target_at(50, 50), 0.1);
  EXPECT_NEAR(near.bearing, kPi / 4, 1e-12);
  EXPECT_NEAR(near.distance, std::hypot(50.0, 50.0), 1e-9);
  EXPECT_FALSE(near.aligning);
  EXPECT_LT((near.command - servo_step(cfg.servo, PidState::zeros(6), obs, 0.1).command).norm(), 1e-12);

  const PushResult far =
      push_step(cfg, PidState::zeros(6), PidState::zeros(1), obs, sensor_seeing_target_at(150, 150), 0.1);
  EXPECT_TRUE(far.aligning);
  // Bearing error is -45 deg: Kp 0.9 * -45 + Ki 0.3 * -4.5, clipped at -15.
  EXPECT_NEAR(far.command[1], -15.0, 1e-9);
}

TEST(Push, Termination) {
  const PushConfig cfg = push_config();
  const Pose obs = cfg.servo.reference_contact;
  EXPECT_EQ(push_step(cfg, PidState::zeros(6), PidState::zeros(1), obs, sensor_seeing_target_at(0, 19.9), 0.1).status,
            PushStatus::Terminated);
  EXPECT_EQ(push_step(cfg, PidState::zeros(6), PidState::zeros(1), obs, sensor_seeing_target_at(0, 20.1), 0.1).status,
            PushStatus::Running);
}

TEST(Push, ContinuousAwayFromSwitchRadius) {
  const PushConfig cfg = push_config();
  const Pose obs = exp(make_twist({0.3, -0.2, 0.1}, {0.01, 0.02, -0.01})) * cfg.servo.reference_contact;
  for (const double r0 : {60.0, 200.0}) {
    const auto cmd = [&](double dy) {
      return push_step(cfg, PidState::zeros(6), PidState::zeros(1), obs,
                       sensor_seeing_target_at(0.3 * r0 + dy, 0.95 * r0), 0.1)
          .command;
    };
    const Twist c0 = cmd(0);
    for (double h : {1e-3, 1e-5, 1e-7}) EXPECT_LT((cmd(h) - c0).norm(), 100 * h) << r0;
  }
}

TEST(Push, ConfigValidation) {
  PushConfig cfg = push_config();
  EXPECT_NO_THROW(cfg.validate());
  cfg.switch_off_radius = 10;
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg = push_config();
  cfg.bearing_pid = PidConfig::zeros(6);
  EXPECT_THROW(cfg.validate(), DomainError);
}

TEST(Push, IndependentInstancesDoNotAlias) {
  const PushConfig a = push_config();
  PushConfig b = push_config();
  b.bearing_pid = controller_preset("push_pid2_dual").pid;
  const Pose obs = exp(make_twist({0.3, -0.2, 0.1}, {0.01, 0.02, -0.01})) * a.servo.reference_contact;

  PidState sa = PidState::zeros(6), ba = PidState::zeros(1);
  std::vector<Twist> alone;
  for (int k = 0; k < 20; ++k) {
    const PushResult r = push_step(a, sa, ba, obs, sensor_seeing_target_at(100 + k, 300), 0.1);
    alone.push_back(r.command);
    sa = r.servo_state;
    ba = r.bearing_state;
  }
  sa = PidState::zeros(6);
  ba = PidState::zeros(1);
  PidState sb = PidState::zeros(6), bb = PidState::zeros(1);
  for (int k = 0; k < 20; ++k) {
    const PushResult rb = push_step(b, sb, bb, obs, sensor_seeing_target_at(-50 - k, 250), 0.1);
    sb = rb.servo_state;
    bb = rb.bearing_state;
    const PushResult r = push_step(a, sa, ba, obs, sensor_seeing_target_at(100 + k, 300), 0.1);
    EXPECT_EQ(r.command, alone[k]);
    sa = r.servo_state;
    ba = r.bearing_state;
  }
}
