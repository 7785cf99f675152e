// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "se3ctl/cli/commands.hpp"
#include "se3ctl/cli/config.hpp"
#include "se3ctl/control.hpp"
#include "se3ctl/errors.hpp"
#include "se3ctl/filter.hpp"
#include "se3ctl/gdnmath.hpp"
#include "se3ctl/sim/pushing.hpp"
#include "se3ctl/sim/scenario.hpp"
#include "se3ctl/uncertainty.hpp"

using namespace se3ctl;
namespace fs = std::filesystem;

namespace {

// Criterion thresholds and runtime budgets (seconds).
constexpr double kRoundtripTol = 1e-9;
constexpr double kAdjointTol = 1e-9;
constexpr double kBchMinSlope = 1.8;
constexpr double kBudget1 = 10.0;
constexpr double kFuseModeTol = 1e-3;
constexpr double kFuseStepTol = 1e-10;
constexpr int kFuseMinConverged = 95;
constexpr double kBudget2 = 30.0;
constexpr double kEuclideanMinSlope = 0.9;
constexpr double kFilterMaxRatio = 0.25;
constexpr double kBudget4 = 60.0;
constexpr double kBudget5 = 5.0;
constexpr double kPartialRelTol = 1e-6;
constexpr double kTrackMaxMm = 1.0;
constexpr double kTrackMaxDeg = 0.5;
constexpr double kFollowMaxDepthMm = 0.5;
constexpr double kFollowMaxNormalDeg = 1.0;
constexpr double kPushMaxTargetMm = 10.0;
constexpr double kDualMaxFollowerDepthMm = 1.5;
constexpr int kTrials = 5;
constexpr double kBudget7 = 300.0;
constexpr double kStationarityTol = 1e-4;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [fail: " << what << "]";
    }
  }
};

std::string fmt(double v, int prec = 3) {
  std::ostringstream os;
  os << std::setprecision(prec) << v;
  return os.str();
}

// ---------------------------------------------------------------- 1

void lie_group(Outcome& o) {
  Rng rng(101);
  double worst_rt = 0;
  for (int i = 0; i < 10000; ++i) {
    Twist xi = oracle::random_twist(rng, 50, 1.0);
    const double th = xi.tail<3>().norm();
    if (th > std::numbers::pi - 1e-3) xi.tail<3>() *= (std::numbers::pi - 1e-3) / th;
    worst_rt = std::max(worst_rt, (log(exp(xi)) - xi).norm());
  }
  double worst_ad = 0;
  for (int i = 0; i < 1000; ++i) {
    const Pose X = exp(oracle::random_twist(rng, 30, 1)), Y = exp(oracle::random_twist(rng, 30, 1));
    worst_ad = std::max(worst_ad, (adjoint(X * Y) - adjoint(X) * adjoint(Y)).norm());
  }
  const Twist big = oracle::random_twist(rng, 20, 0.8);
  const Twist dir = oracle::random_twist(rng, 1, 1).normalized();
  double min_slope = std::numeric_limits<double>::infinity();
  for (Small which : {Small::First, Small::Second}) {
    std::vector<double> s, err;
    for (double t : {1e-1, 1e-2, 1e-3, 1e-4}) {
      const Twist a = which == Small::First ? Twist(t * dir) : big;
      const Twist b = which == Small::First ? big : Twist(t * dir);
      s.push_back(t);
      err.push_back((bch_compose(a, b, which) - oracle::logm(oracle::exp_pose(a) * oracle::exp_pose(b))).norm());
    }
    min_slope = std::min(min_slope, oracle::loglog_slope(s, err));
  }
  o.detail << "roundtrip max " << fmt(worst_rt) << ", adjoint max " << fmt(worst_ad) << ", BCH slope "
           << fmt(min_slope);
  o.check(worst_rt < kRoundtripTol, "roundtrip");
  o.check(worst_ad < kAdjointTol, "adjoint");
  o.check(min_slope >= kBchMinSlope, "BCH slope");
}

// ---------------------------------------------------------------- 2

void fusion(Outcome& o) {
  Rng rng(202);
  double worst = 0, sum = 0;
  int converged = 0;
  for (int i = 0; i < 100; ++i) {
    const auto [a, b] = oracle::concentrated_pair(rng);
    const FuseReport rep = fuse_detailed(a, b);
    const double gap = oracle::logm(rep.result.mean * oracle::product_mode(a, b).inverse()).norm();
    worst = std::max(worst, gap);
    sum += gap;
    bool hit = false;
    for (std::size_t k = 0; k < rep.step_norms.size() && k < 5; ++k) hit = hit || rep.step_norms[k] < kFuseStepTol;
    converged += hit ? 1 : 0;
  }
  o.detail << "mode gap mean " << fmt(sum / 100) << " max " << fmt(worst) << ", converged " << converged << "/100";
  o.check(worst < kFuseModeTol, "mode discrepancy");
  o.check(converged >= kFuseMinConverged, "convergence");
}

// ---------------------------------------------------------------- 3

void euclidean_limit(Outcome& o) {
  Rng rng(303);
  double min_slope = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 5; ++trial) {
    const Twist da = oracle::random_twist(rng, 1, 1), db = oracle::random_twist(rng, 1, 1);
    const Matrix6 Ca = oracle::random_spd(rng, 0.5, 2), Cb = oracle::random_spd(rng, 0.5, 2);
    std::vector<double> scales, gaps;
    for (double s : {1e-2, 1e-3, 1e-4}) {
      const PoseGaussian a{exp(std::sqrt(s) * da), s * Ca};
      const PoseGaussian b{exp(std::sqrt(s) * db), s * Cb};
      const EuclideanGaussian p = gaussian_product(to_global_tangent(a), to_global_tangent(b));
      scales.push_back(s);
      gaps.push_back((log(fuse(a, b).mean) - p.mean).norm());
    }
    min_slope = std::min(min_slope, oracle::loglog_slope(scales, gaps));
  }
  o.detail << "min slope over 5 draws " << fmt(min_slope);
  o.check(min_slope >= kEuclideanMinSlope, "slope");
}

// ---------------------------------------------------------------- 4

void filter_study_check(Outcome& o) {
  const cli::Config c = cli::parse_config("task: filter_study\nseed: 1\n", "acceptance");
  const cli::FilterStudyConfig& f = c.filter_study;
  const std::vector<double> grid = {std::numeric_limits<double>::infinity(), 10, 1, 0.1, 0.01};
  Rng rng = make_rng(c.seed);
  const sim::StudySequence seq = sim::make_study_sequence(f.length, f.observation, f.sample, rng);
  const std::vector<StudyRow> rows = filter_study(seq.truth, seq.observations, grid, c.seed);
  bool monotone = true;
  for (std::size_t r = 2; r < rows.size(); ++r) monotone = monotone && (rows[r].mae.array() < rows[r - 1].mae.array()).all();
  const Vector6 ratio = rows.back().mae.cwiseQuotient(rows.front().mae);
  o.detail << f.length << " steps, ratio at 0.01:";
  for (int k = 0; k < 6; ++k) o.detail << ' ' << fmt(ratio[k]);
  o.check(f.length == 2000, "sequence length");
  o.check(monotone, "monotone over 10, 1, 0.1, 0.01");
  for (int k = 0; k < 6; ++k) o.check(ratio[k] < kFilterMaxRatio, "ratio component " + std::to_string(k));
}

// ---------------------------------------------------------------- 5

Eigen::VectorXd v6(double a, double b, double c, double d, double e, double f) {
  Eigen::VectorXd v(6);
  v << a, b, c, d, e, f;
  return v;
}

bool near(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double tol = 1e-12) {
  return a.size() == b.size() && (a - b).cwiseAbs().maxCoeff() <= tol;
}

void controller(Outcome& o) {
  const Eigen::VectorXd z = Eigen::VectorXd::Zero(6);
  bool passthrough = true;
  for (const char* name : {"tracking", "surface_follow", "push_pid1", "stabiliser"}) {
    const PidConfig cfg = controller_preset(name).pid;
    const Eigen::VectorXd ff = v6(1.5, -2, 10, 0.01, -0.02, 0.3);
    PidState s = PidState::zeros(6);
    for (int k = 0; k < 5; ++k) {
      const PidResult r = pid_step(cfg, s, ff, z, 1.0 / 30);
      passthrough = passthrough && r.u == ff;
      s = r.state;
    }
    const ServoConfig sc = servo_config_from_preset(controller_preset(name));
    const ServoResult sr = servo_step(sc, PidState::zeros(6), sc.reference_contact, 1.0 / 30);
    passthrough = passthrough && (sr.command - sc.feedforward).norm() < 1e-12;
  }

  Rng rng(505);
  PidConfig p = PidConfig::zeros(6);
  p.kp = v6(5, 5, 5, 2, 2, 0);
  bool linear = true;
  for (int i = 0; i < 100; ++i) {
    const Eigen::VectorXd e = oracle::random_twist(rng, 10, 1);
    const double k = uniform(rng, -100, 100);
    const Eigen::VectorXd a = pid_step(p, PidState::zeros(6), z, k * e, 0.1).u;
    const Eigen::VectorXd b = k * pid_step(p, PidState::zeros(6), z, e, 0.1).u;
    linear = linear && (a - b).norm() < 1e-12 * (1 + b.norm());
  }

  bool contained = true;
  const PidConfig sf = controller_preset("surface_follow").pid;
  PidState s = PidState::zeros(6);
  for (int k = 0; k < 2000; ++k) {
    Eigen::VectorXd e(6);
    for (int i = 0; i < 6; ++i) e[i] = uniform(rng, -1, 1) * std::pow(10.0, uniform(rng, -3, 6));
    s = pid_step(sf, s, z, e, uniform(rng, 1e-3, 1.0)).state;
    contained = contained && (s.integral.array().abs() <= 25.0).all();
  }

  // Hand-computed single steps for each preset.
  bool hand = true;
  const PidConfig tr = controller_preset("tracking").pid;
  const Eigen::VectorXd e1 = v6(1, 1, 1, 0.1, 0.1, 0.1);
  PidResult r = pid_step(tr, PidState::zeros(6), z, e1, 0.1);
  hand = hand && near(r.u, v6(5.05, 5.05, 5.05, 0.202, 0.202, 0.002));
  r = pid_step(tr, r.state, z, 2 * e1, 0.1);
  hand = hand && near(r.u, v6(12.65, 12.65, 12.65, 0.506, 0.506, 0.106));
  hand = hand && near(pid_step(sf, PidState::zeros(6), z, v6(3, 3, 3, 0.1, 0.1, 0.1), 0.5).u,
                      v6(0, 0, 6.15, 0.205, 0.205, 0));
  const Eigen::VectorXd e2 = v6(2, 2, 2, 0.2, 0.2, 0.2);
  const ControllerPreset p1 = controller_preset("push_pid1");
  hand = hand && near(pid_step(p1.pid, PidState::zeros(6), p1.feedforward, e2, 1.0).u, v6(2.2, 0, 10, 0.22, 0, 0));
  hand = hand &&
         near(pid_step(controller_preset("stabiliser").pid, PidState::zeros(6), z, e2, 1.0).u, v6(11, 0, 11, 0.22, 0, 0));
  const Eigen::VectorXd one = Eigen::VectorXd::Zero(1), ten = Eigen::VectorXd::Constant(1, 10.0);
  hand = hand && std::abs(pid_step(controller_preset("push_pid2_single").pid, PidState::zeros(1), one, ten, 0.1).u[0] -
                          9.3) < 1e-12;
  hand = hand && std::abs(pid_step(controller_preset("push_pid2_dual").pid, PidState::zeros(1), one, ten, 0.1).u[0] -
                          9.5) < 1e-12;

  o.detail << "passthrough " << (passthrough ? "exact" : "broken") << ", linearity " << (linear ? "ok" : "broken")
           << ", anti-windup " << (contained ? "contained" : "escaped") << ", preset hand steps "
           << (hand ? "match" : "differ");
  o.check(passthrough, "feedforward passthrough");
  o.check(linear, "linearity");
  o.check(contained, "anti-windup");
  o.check(hand, "hand steps");
}

// ---------------------------------------------------------------- 6

void pushing_model(Outcome& o) {
  Rng rng(606);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    sim::PushedObject ob;
    ob.y = uniform(rng, -300, 300);
    ob.z = uniform(rng, 10, 400);
    ob.phi = uniform(rng, -0.5, 0.5);
    const sim::BearingSensitivity s = sim::bearing_sensitivity(ob);
    const double h = 1e-4;
    const auto th = [](double y, double z, double phi) { return std::atan2(y, z) - phi; };
    const double fy = (th(ob.y + h, ob.z, ob.phi) - th(ob.y - h, ob.z, ob.phi)) / (2 * h);
    const double fz = (th(ob.y, ob.z + h, ob.phi) - th(ob.y, ob.z - h, ob.phi)) / (2 * h);
    const double fp = (th(ob.y, ob.z, ob.phi + h) - th(ob.y, ob.z, ob.phi - h)) / (2 * h);
    worst = std::max({worst, std::abs(s.d_dy - fy) / std::abs(fy), std::abs(s.d_dz - fz) / std::abs(fz),
                      std::abs(s.d_dphi - fp) / std::abs(fp)});
  }
  int flips = 0;
  for (const char* name : {"square", "circle", "hexagon"}) {
    const sim::ObjectPreset p = sim::object_preset(name);
    const auto gain = [&](double r) {
      sim::PushedObject ob;
      ob.alpha = p.alpha;
      ob.r0 = p.r0;
      ob.z = r;
      const double th0 = ob.bearing();
      for (int k = 0; k < 20; ++k) ob = sim::push_object_step(ob, 0.01, 0.0);
      return (ob.bearing() - th0) / 0.2;
    };
    const double rf = p.r0 / p.alpha;
    flips += gain(0.9 * rf) > 0 && gain(1.1 * rf) < 0 ? 1 : 0;
  }
  o.detail << "partials max rel err " << fmt(worst) << ", sign flip at r0/alpha for " << flips << "/3 objects";
  o.check(worst < kPartialRelTol, "partials");
  o.check(flips == 3, "sign flip");
}

// ---------------------------------------------------------------- 7

struct TaskRun {
  std::vector<sim::Metrics> trials;
};

TaskRun run_trials(const std::string& config) {
  const cli::Config c = cli::load_config(std::string(SE3CTL_CONFIG_DIR) + "/" + config);
  TaskRun out;
  for (int i = 0; i < kTrials; ++i) {
    Rng rng = make_rng(c.seed + static_cast<std::uint64_t>(i));
    out.trials.push_back(sim::run_scenario(c.scenario, rng).metrics);
  }
  return out;
}

std::string mean_std(const TaskRun& t, double sim::Metrics::*field) {
  double m = 0, s = 0;
  for (const auto& x : t.trials) m += x.*field;
  m /= static_cast<double>(t.trials.size());
  for (const auto& x : t.trials) s += (x.*field - m) * (x.*field - m);
  s = std::sqrt(s / static_cast<double>(t.trials.size() - 1));
  return fmt(m) + " +- " + fmt(s);
}

template <class Pred>
int count_ok(const TaskRun& t, Pred pred) {
  int n = 0;
  for (const auto& m : t.trials) n += pred(m) ? 1 : 0;
  return n;
}

void tasks(Outcome& o) {
  using M = sim::Metrics;
  const TaskRun track = run_trials("track.yaml");
  const int track_ok = count_ok(track, [](const M& m) {
    return m.status == "completed" && m.mean_pose_error_mm < kTrackMaxMm && m.mean_pose_error_deg < kTrackMaxDeg;
  });
  o.detail << "track " << mean_std(track, &M::mean_pose_error_mm) << " mm, " << mean_std(track, &M::mean_pose_error_deg)
           << " deg (" << track_ok << "/" << kTrials << ")";
  o.check(track_ok == kTrials, "track");

  for (const char* cfg : {"follow_ramp.yaml", "follow_hemisphere.yaml"}) {
    const TaskRun f = run_trials(cfg);
    const int ok = count_ok(f, [](const M& m) {
      return m.status == "completed" && m.mean_depth_error_mm < kFollowMaxDepthMm &&
             m.mean_normal_angle_deg < kFollowMaxNormalDeg;
    });
    const std::string name = std::string(cfg).substr(0, std::string(cfg).find('.'));
    o.detail << "; " << name << " depth " << mean_std(f, &M::mean_depth_error_mm) << " mm, normal "
             << mean_std(f, &M::mean_normal_angle_deg) << " deg (" << ok << "/" << kTrials << ")";
    o.check(ok == kTrials, name);
  }

  const TaskRun single = run_trials("push_single.yaml");
  const int single_ok = count_ok(
      single, [](const M& m) { return m.status == "terminated" && m.final_target_error_mm < kPushMaxTargetMm; });
  o.detail << "; push_single target " << mean_std(single, &M::final_target_error_mm) << " mm (" << single_ok << "/"
           << kTrials << ")";
  o.check(single_ok == kTrials, "push_single");

  const TaskRun dual = run_trials("push_dual.yaml");
  const int dual_ok = count_ok(dual, [](const M& m) {
    return m.status == "terminated" && m.follower_max_depth_error_mm <= kDualMaxFollowerDepthMm;
  });
  o.detail << "; push_dual follower depth max " << mean_std(dual, &M::follower_max_depth_error_mm) << " mm, mean "
           << mean_std(dual, &M::follower_mean_depth_error_mm) << " mm (" << dual_ok << "/" << kTrials << ")";
  o.check(dual_ok == kTrials, "push_dual");
}

// ---------------------------------------------------------------- 8

void numerics(Outcome& o) {
  const std::vector<double> xs = {-1e308, -1e-308, 0.0, 1e-308, 1e308};
  const SoftboundParams sb{1e-6, 1e6};
  bool finite_mono = true;
  double prev_sp = -std::numeric_limits<double>::infinity(), prev_sb = prev_sp;
  for (double x : xs) {
    const double a = softplus_stable(x), b = softbound(x, sb);
    finite_mono = finite_mono && std::isfinite(a) && std::isfinite(b) && a >= prev_sp && b >= prev_sb;
    prev_sp = a;
    prev_sb = b;
  }

  PoseTable l(2, 6), pz = PoseTable::Zero(2, 6);
  l << 1e100, -1e100, 1e-300, 0, 1e50, -1e50, 1e-308, 1e-308, 1e100, -1e100, 0, 0;
  std::vector<HeteroPrediction> preds(2);
  preds[0].inv_sigma = Vector6::Constant(1e-6);
  preds[1].inv_sigma = Vector6::Constant(1e6);
  preds[1].inv_sigma[2] = preds[1].inv_sigma[3] = 1e-6;
  const bool losses_finite = std::isfinite(mean_nll(l, preds)) &&
                             std::isfinite(weighted_mse(l, pz, default_mse_weights()));

  Rng rng(808);
  double worst = 0;
  for (int trial = 0; trial < 60; ++trial) {
    PoseTable lab(1, 6);
    for (int j = 0; j < 6; ++j) lab(0, j) = std::normal_distribution<double>()(rng);
    HeteroPrediction p;
    p.mu = Vector6::Zero();
    const int j = trial % 6;
    const double s0 = 1.0 / std::abs(lab(0, j));
    const auto nll_at = [&](double s) {
      HeteroPrediction q = p;
      q.inv_sigma[j] = s;
      return mean_nll(lab, {q});
    };
    const double h = 1e-6 * s0;
    // Relative to the magnitude of either term of the derivative, |e|^2 s0 = 1 / s0.
    worst = std::max(worst, std::abs((nll_at(s0 + h) - nll_at(s0 - h)) / (2 * h)) * s0);
  }
  o.detail << "extremes " << (finite_mono ? "finite and monotone" : "broken") << ", losses "
           << (losses_finite ? "finite" : "non-finite") << ", stationarity rel " << fmt(worst);
  o.check(finite_mono, "softplus/softbound extremes");
  o.check(losses_finite, "loss finiteness");
  o.check(worst < kStationarityTol, "stationarity");
}

// ---------------------------------------------------------------- 9

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void determinism(Outcome& o) {
  const fs::path root = fs::temp_directory_path() / "se3ctl_acceptance_determinism";
  fs::remove_all(root);
  int identical = 0, total = 0;
  for (const char* cfg : {"track.yaml", "follow_flat.yaml", "follow_ramp.yaml", "follow_hemisphere.yaml",
                          "push_single.yaml", "push_dual.yaml"}) {
    const std::string path = std::string(SE3CTL_CONFIG_DIR) + "/" + cfg;
    std::string outputs[2];
    for (int run = 0; run < 2; ++run) {
      const fs::path dir = root / (std::string(cfg) + std::to_string(run));
      const std::string d = dir.string();
      const char* argv[] = {"se3ctl", "run", path.c_str(), "--seed", "7", "--out-dir", d.c_str(), "--quiet"};
      std::ostringstream out, err;
      if (cli::main_entry(8, argv, out, err) != cli::kOk) o.check(false, std::string(cfg) + ": " + err.str());
      for (const auto& e : fs::directory_iterator(dir)) outputs[run] += e.path().filename().string() + slurp(e.path());
    }
    ++total;
    identical += !outputs[0].empty() && outputs[0] == outputs[1] ? 1 : 0;
  }
  fs::remove_all(root);
  o.detail << identical << "/" << total << " configs bitwise identical across reruns (CSV + JSON)";
  o.check(identical == total, "bitwise identity");
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<void(Outcome&)> run;
  };
  const double none = std::numeric_limits<double>::infinity();
  const std::vector<Criterion> criteria = {
      {1, "lie group", kBudget1, lie_group},
      {2, "fusion", kBudget2, fusion},
      {3, "euclidean limit", none, euclidean_limit},
      {4, "filter study", kBudget4, filter_study_check},
      {5, "controller", kBudget5, controller},
      {6, "pushing model", none, pushing_model},
      {7, "task simulations", kBudget7, tasks},
      {8, "numerical stability", none, numerics},
      {9, "determinism", none, determinism},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= c.budget_s) o.check(false, "runtime over " + fmt(c.budget_s) + " s");
    failed += o.pass ? 0 : 1;
    std::cout << "criterion " << c.id << ' ' << (o.pass ? "PASS" : "FAIL") << "  " << c.name << ": "
              << o.detail.str() << " (" << std::fixed << std::setprecision(2) << secs << " s)" << std::defaultfloat
              << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " criteria fail") << std::endl;
  return failed == 0 ? 0 : 1;
}
