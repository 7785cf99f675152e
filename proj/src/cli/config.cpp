#include "se3ctl/cli/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "se3ctl/errors.hpp"

namespace se3ctl::cli {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

/// YAML node plus the dotted path and source used in diagnostics.
class Field {
 public:
  Field(YAML::Node node, std::string path, const std::string* source)
      : node_(std::move(node)), path_(std::move(path)), source_(source) {}

  [[noreturn]] void fail(const std::string& msg) const {
    std::ostringstream os;
    const YAML::Mark mark = node_.Mark();
    os << *source_;
    if (mark.line >= 0) os << ':' << mark.line + 1 << ':' << mark.column + 1;
    os << ": " << (path_.empty() ? "" : path_ + ": ") << msg;
    throw ConfigError(os.str());
  }

  const std::string& path() const { return path_; }

  void require_map() const {
    if (!node_.IsMap()) fail("expected a mapping");
  }

  /// Rejects keys outside `allowed`, pointing at the offending key.
  void allow(const std::set<std::string>& allowed) const {
    require_map();
    for (const auto& kv : node_) {
      const std::string key = kv.first.as<std::string>();
      if (!allowed.count(key)) {
        std::string list;
        for (const std::string& a : allowed) list += (list.empty() ? "" : ", ") + a;
        Field(kv.first, join(key), source_).fail("unknown key (allowed: " + list + ")");
      }
    }
  }

  bool has(const std::string& key) const { return node_.IsMap() && node_[key]; }

  Field operator[](const std::string& key) const { return Field(node_[key], join(key), source_); }

  std::optional<Field> get(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    const Field f = (*this)[key];
    if (f.node_.IsNull()) f.fail("value must not be empty");
    return f;
  }

  Field require(const std::string& key) const {
    if (!has(key)) fail("missing required field '" + key + "'");
    return *get(key);
  }

  double as_double() const {
    if (!node_.IsScalar()) fail("expected a number");
    const std::string s = node_.Scalar();
    std::string lower = s;
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "inf" || lower == "infinity" || lower == ".inf" || lower == "+inf") {
      return std::numeric_limits<double>::infinity();
    }
    try {
      return node_.as<double>();
    } catch (const YAML::Exception&) {
      fail("expected a number, got '" + s + "'");
    }
  }

  double as_finite() const {
    const double v = as_double();
    if (!std::isfinite(v)) fail("must be finite");
    return v;
  }

  double as_positive() const {
    const double v = as_finite();
    if (!(v > 0.0)) fail("must be > 0");
    return v;
  }

  double as_nonnegative() const {
    const double v = as_finite();
    if (!(v >= 0.0)) fail("must be >= 0");
    return v;
  }

  std::uint64_t as_u64() const {
    try {
      return node_.as<std::uint64_t>();
    } catch (const YAML::Exception&) {
      fail("expected a non-negative integer");
    }
  }

  bool as_bool() const {
    try {
      return node_.as<bool>();
    } catch (const YAML::Exception&) {
      fail("expected true or false");
    }
  }

  std::string as_string() const {
    if (!node_.IsScalar()) fail("expected a string");
    return node_.Scalar();
  }

  std::vector<double> as_vector(std::size_t n = 0) const {
    if (!node_.IsSequence()) fail("expected a list");
    if (n && node_.size() != n) fail("expected " + std::to_string(n) + " values, got " + std::to_string(node_.size()));
    std::vector<double> out;
    for (std::size_t i = 0; i < node_.size(); ++i) {
      out.push_back(Field(node_[i], path_ + "[" + std::to_string(i) + "]", source_).as_double());
    }
    return out;
  }

  Vector6 as_vec6() const {
    const std::vector<double> v = as_vector(6);
    Vector6 out;
    for (int i = 0; i < 6; ++i) {
      if (!std::isfinite(v[i])) fail("values must be finite");
      out[i] = v[i];
    }
    return out;
  }

  /// 6-vector with the angular half given in degrees.
  Vector6 as_vec6_deg() const {
    Vector6 v = as_vec6();
    v.tail<3>() *= kDeg;
    return v;
  }

  std::size_t size() const { return node_.size(); }
  Field at(std::size_t i) const { return Field(node_[i], path_ + "[" + std::to_string(i) + "]", source_); }
  bool is_sequence() const { return node_.IsSequence(); }

 private:
  std::string join(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  YAML::Node node_;
  std::string path_;
  const std::string* source_;
};

template <class F>
auto rethrow_domain(const Field& f, F&& fn) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    f.fail(e.what());
  }
}

ControllerPreset read_controller(const Field& f, const std::string& default_preset) {
  f.allow({"preset", "kp", "ki", "kd", "integral_clip", "output_clip", "ewma_decay", "reference", "feedforward"});
  const std::string name = f.get("preset") ? f["preset"].as_string() : default_preset;
  ControllerPreset p = rethrow_domain(f, [&] { return controller_preset(name); });
  const int n = p.pid.size();
  const auto gains = [&](const char* key, Eigen::VectorXd& dst) {
    if (const auto g = f.get(key)) {
      const std::vector<double> v = g->as_vector(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) dst[i] = v[i];
    }
  };
  gains("kp", p.pid.kp);
  gains("ki", p.pid.ki);
  gains("kd", p.pid.kd);
  if (const auto c = f.get("integral_clip")) {
    const std::vector<double> v = c->as_vector(2);
    p.pid.set_integral_clip(v[0], v[1]);
  }
  if (const auto c = f.get("output_clip")) {
    const std::vector<double> v = c->as_vector(2);
    p.pid.set_output_clip(v[0], v[1]);
  }
  if (const auto d = f.get("ewma_decay")) p.pid.ewma_decay = d->as_finite();
  if (const auto r = f.get("reference")) p.reference_euler = r->as_vec6_deg();
  if (const auto v = f.get("feedforward")) p.feedforward = v->as_vec6_deg();
  rethrow_domain(f, [&] {
    p.pid.validate();
    return 0;
  });
  return p;
}

void read_observation(const Field& f, sim::ObservationModel& m, bool* noise_free) {
  std::set<std::string> keys = {"mae", "std", "cov_multiplier"};
  if (noise_free) keys.insert("noise_free");
  f.allow(keys);
  if (f.has("mae") && f.has("std")) f.fail("give either mae or std, not both");
  const double mult = f.get("cov_multiplier") ? f["cov_multiplier"].as_positive() : 1.0;
  if (const auto v = f.get("mae")) {
    m = sim::ObservationModel::from_mae(v->as_vec6(), mult);
  } else if (const auto s = f.get("std")) {
    m.std = s->as_vec6();
  }
  m.cov_multiplier = mult;
  if (!(m.std.array() > 0.0).all()) f.fail("noise standard deviations must be > 0");
  if (noise_free && f.get("noise_free")) *noise_free = f["noise_free"].as_bool();
}

void read_contact(const Field& f, sim::ContactOptions& c) {
  f.allow({"tip_radius", "max_depth", "slip_radius", "slip_spin_deg", "stick"});
  if (const auto v = f.get("tip_radius")) c.tip_radius = v->as_positive();
  if (const auto v = f.get("max_depth")) c.max_depth = v->as_positive();
  if (const auto v = f.get("slip_radius")) c.slip_radius = v->as_nonnegative();
  if (const auto v = f.get("slip_spin_deg")) c.slip_spin = v->as_nonnegative() * kDeg;
  if (const auto v = f.get("stick"); v && v->as_bool()) c.slip_radius = c.slip_spin = -1.0;
}

void read_sample(const Field& f, SampleSpec& s) {
  f.allow({"r_max", "z_min", "z_max", "phi_max_deg", "gamma_min_deg", "gamma_max_deg"});
  if (const auto v = f.get("r_max")) s.r_max = v->as_positive();
  if (const auto v = f.get("z_min")) s.z_min = v->as_finite();
  if (const auto v = f.get("z_max")) s.z_max = v->as_finite();
  if (const auto v = f.get("phi_max_deg")) s.phi_max = v->as_positive();
  if (const auto v = f.get("gamma_min_deg")) s.gamma_min = v->as_finite();
  if (const auto v = f.get("gamma_max_deg")) s.gamma_max = v->as_finite();
  rethrow_domain(f, [&] {
    s.validate();
    return 0;
  });
}

void read_track(const Field& f, sim::TrackSetup& t) {
  f.allow({"motion", "amplitude", "phase_deg", "period", "segments", "steady_state_start", "initial_offset"});
  if (const auto m = f.get("motion")) {
    const std::string s = m->as_string();
    if (s == "periodic") t.motion = sim::TrackSetup::Motion::Periodic;
    else if (s == "segments") t.motion = sim::TrackSetup::Motion::Segments;
    else if (s == "static") t.motion = sim::TrackSetup::Motion::Static;
    else m->fail("expected periodic, segments or static");
  }
  if (const auto v = f.get("amplitude")) t.periodic.amplitude = v->as_vec6_deg();
  if (const auto v = f.get("phase_deg")) t.periodic.phase = v->as_vec6() * kDeg;
  if (const auto v = f.get("period")) t.periodic.period = v->as_positive();
  if (const auto v = f.get("steady_state_start")) t.steady_state_start = v->as_nonnegative();
  if (const auto v = f.get("initial_offset")) t.initial_offset = v->as_vec6_deg();
  if (const auto segs = f.get("segments")) {
    if (!segs->is_sequence()) segs->fail("expected a list of segments");
    t.segments.clear();
    for (std::size_t i = 0; i < segs->size(); ++i) {
      const Field s = segs->at(i);
      s.allow({"axis", "amount", "duration", "hold"});
      sim::Segment seg;
      const double axis = s.require("axis").as_finite();
      if (axis != std::floor(axis) || axis < 0 || axis > 5) s["axis"].fail("axis must be an integer 0..5");
      seg.axis = static_cast<int>(axis);
      seg.amount = s.require("amount").as_finite() * (seg.axis >= 3 ? kDeg : 1.0);
      seg.duration = s.require("duration").as_positive();
      if (const auto h = s.get("hold")) seg.hold = h->as_nonnegative();
      t.segments.push_back(seg);
    }
  }
}

void read_follow(const Field& f, sim::FollowSetup& fs) {
  f.allow({"surface", "radius", "extent_deg", "speed", "directions_deg", "radial_paths", "ramp_start_deg",
           "max_polar_deg"});
  const std::string surface = f.get("surface") ? f["surface"].as_string() : "flat";
  if (surface == "flat") fs.surface = sim::SurfaceModel::Kind::Flat;
  else if (surface == "ramp") fs.surface = sim::SurfaceModel::Kind::Ramp;
  else if (surface == "hemisphere") fs.surface = sim::SurfaceModel::Kind::Hemisphere;
  else f["surface"].fail("expected flat, ramp or hemisphere");
  if (const auto v = f.get("radius")) fs.radius = v->as_positive();
  if (const auto v = f.get("extent_deg")) fs.extent_deg = v->as_positive();
  if (const auto v = f.get("speed")) fs.speed = v->as_nonnegative();
  if (const auto v = f.get("ramp_start_deg")) fs.ramp_start_deg = v->as_finite();
  if (const auto v = f.get("max_polar_deg")) fs.max_polar_deg = v->as_positive();
  if (f.has("directions_deg") && f.has("radial_paths")) f.fail("give either directions_deg or radial_paths");
  int radial = fs.surface == sim::SurfaceModel::Kind::Hemisphere ? 8 : 0;
  if (const auto v = f.get("radial_paths")) {
    const double n = v->as_positive();
    if (n != std::floor(n) || n > 360) v->fail("must be an integer in 1..360");
    radial = static_cast<int>(n);
  }
  if (const auto v = f.get("directions_deg")) {
    fs.directions_deg = v->as_vector();
    if (fs.directions_deg.empty()) v->fail("must not be empty");
  } else if (radial > 0) {
    fs.directions_deg.clear();
    for (int i = 0; i < radial; ++i) fs.directions_deg.push_back(360.0 * i / radial);
  }
}

void read_push(const Field& f, sim::PushSetup& p) {
  f.allow({"object", "alpha", "r0", "depth", "start", "target", "push_depth", "switch_off_radius",
           "termination_radius", "bearing_units", "tall", "stability_tolerance", "stability_decay",
           "stability_recovery"});
  if (const auto v = f.get("object")) p.object = rethrow_domain(*v, [&] { return sim::object_preset(v->as_string()); });
  if (const auto v = f.get("alpha")) p.object.alpha = v->as_positive();
  if (const auto v = f.get("r0")) p.object.r0 = v->as_positive();
  if (const auto v = f.get("depth")) p.object.depth = v->as_positive();
  if (const auto v = f.get("start")) {
    const std::vector<double> s = v->as_vector(2);
    p.start = {s[0], s[1]};
  }
  if (const auto v = f.get("target")) {
    const std::vector<double> s = v->as_vector(2);
    p.target = {s[0], s[1]};
  }
  if (const auto v = f.get("push_depth")) p.push_depth = v->as_positive();
  if (const auto v = f.get("switch_off_radius")) p.switch_off_radius = v->as_nonnegative();
  if (const auto v = f.get("termination_radius")) p.termination_radius = v->as_positive();
  if (const auto v = f.get("bearing_units")) {
    const std::string u = v->as_string();
    if (u != "deg" && u != "rad") v->fail("expected deg or rad");
    p.bearing_in_degrees = u == "deg";
  }
  if (const auto v = f.get("tall")) p.tall = v->as_bool();
  if (const auto v = f.get("stability_tolerance")) p.stability_tolerance = v->as_positive();
  if (const auto v = f.get("stability_decay")) p.stability_decay = v->as_nonnegative();
  if (const auto v = f.get("stability_recovery")) p.stability_recovery = v->as_nonnegative();
}

const std::set<std::string> kCommon = {"task", "seed", "name", "out_dir"};

Config parse_root(const YAML::Node& root, const std::string& source) {
  const Field top(root, "", &source);
  if (!root.IsMap()) top.fail("config must be a mapping with a 'task' field");
  Config c;
  const Field task_f = top.require("task");
  c.task = task_f.as_string();

  std::set<std::string> allowed = kCommon;
  const bool sim_task = c.task == "track" || c.task == "follow" || c.task == "push_single" || c.task == "push_dual";
  if (sim_task) {
    for (const char* k : {"dt", "duration", "transient", "observation", "filter", "controller", "contact"}) {
      allowed.insert(k);
    }
    if (c.task == "track") allowed.insert("track");
    if (c.task == "follow") allowed.insert("follow");
    if (c.task == "push_single" || c.task == "push_dual") allowed.insert({"push", "bearing"});
    if (c.task == "push_dual") allowed.insert({"follower", "follower_contact"});
  } else if (c.task == "filter_study") {
    allowed.insert({"observation", "filter_study"});
  } else if (c.task == "gen_dataset") {
    allowed.insert("dataset");
  } else {
    task_f.fail("unknown task '" + c.task + "' (expected track, follow, push_single, push_dual, filter_study, "
                "gen_dataset)");
  }
  top.allow(allowed);

  if (const auto v = top.get("seed")) c.seed = v->as_u64();
  c.name = top.get("name") ? top["name"].as_string() : c.task;
  if (c.name.empty() || c.name.find('/') != std::string::npos) top["name"].fail("must be a plain file stem");
  if (const auto v = top.get("out_dir")) c.out_dir = v->as_string();

  if (c.task == "filter_study") {
    if (const auto o = top.get("observation")) read_observation(*o, c.filter_study.observation, nullptr);
    if (const auto f = top.get("filter_study")) {
      f->allow({"length", "sigma_psi", "sample"});
      if (const auto v = f->get("length")) {
        c.filter_study.length = v->as_u64();
        if (c.filter_study.length < 100) v->fail("must be >= 100");
      }
      if (const auto v = f->get("sigma_psi")) {
        c.filter_study.sigma_psi = v->as_vector();
        if (c.filter_study.sigma_psi.empty()) v->fail("must not be empty");
        for (double s : c.filter_study.sigma_psi) {
          if (!(s > 0.0)) v->fail("entries must be > 0 (use inf for the unfiltered baseline)");
        }
      }
      if (const auto v = f->get("sample")) read_sample(*v, c.filter_study.sample);
    }
    return c;
  }
  if (c.task == "gen_dataset") {
    if (const auto d = top.get("dataset")) {
      d->allow({"count", "sample"});
      if (const auto v = d->get("count")) {
        c.dataset.count = v->as_u64();
        if (c.dataset.count == 0) v->fail("must be >= 1");
      }
      if (const auto v = d->get("sample")) read_sample(*v, c.dataset.sample);
    }
    return c;
  }

  sim::Scenario& s = c.scenario;
  s = sim::Scenario::defaults(sim::task_from_string(c.task));
  s.seed = c.seed;
  if (const auto v = top.get("dt")) s.dt = v->as_positive();
  if (const auto v = top.get("duration")) s.duration = v->as_positive();
  if (const auto v = top.get("transient")) s.transient = v->as_nonnegative();
  if (const auto o = top.get("observation")) read_observation(*o, s.observation, &s.noise_free);
  if (const auto f = top.get("filter")) {
    f->allow({"enabled", "sigma_phi"});
    if (const auto v = f->get("enabled")) s.use_filter = v->as_bool();
    if (const auto v = f->get("sigma_phi")) s.sigma_phi = v->as_positive();
  }
  if (const auto v = top.get("contact")) read_contact(*v, s.contact);
  if (const auto v = top.get("follower_contact")) read_contact(*v, s.follower_contact);
  if (const auto v = top.get("track")) read_track(*v, s.track);
  if (const auto v = top.get("follow")) read_follow(*v, s.follow);
  if (const auto v = top.get("push")) read_push(*v, s.push);

  // tall objects switch the default presets to their offset reference poses
  const bool tall = s.push.tall;
  const std::string ctrl_default =
      (c.task == "push_single" || c.task == "push_dual") && tall ? "push_tall" : s.controller.name;
  if (const auto v = top.get("controller")) s.controller = read_controller(*v, ctrl_default);
  else if (ctrl_default != s.controller.name) s.controller = controller_preset(ctrl_default);
  if (c.task == "push_single" || c.task == "push_dual") {
    if (const auto v = top.get("bearing")) s.bearing = read_controller(*v, s.bearing.name);
    if (s.bearing.pid.size() != 1) top["bearing"].fail("bearing preset must be single-channel");
  }
  if (c.task == "push_dual") {
    const std::string f_default = tall ? "stabiliser_tall" : s.follower.name;
    if (const auto v = top.get("follower")) s.follower = read_controller(*v, f_default);
    else if (f_default != s.follower.name) s.follower = controller_preset(f_default);
  }
  if (s.controller.pid.size() != 6) top["controller"].fail("controller preset must have 6 channels");
  if (c.task == "push_dual" && s.follower.pid.size() != 6) top["follower"].fail("follower preset must have 6 channels");

  try {
    s.validate();
  } catch (const Error& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return c;
}

}  // namespace

bool Config::is_simulation() const {
  return task == "track" || task == "follow" || task == "push_single" || task == "push_dual";
}

Config parse_config(const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    std::ostringstream os;
    os << source << ':' << e.mark.line + 1 << ':' << e.mark.column + 1 << ": " << e.msg;
    throw ConfigError(os.str());
  }
  return parse_root(root, source);
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot read config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

namespace {

std::string vec(const Eigen::VectorXd& v, bool angular_deg = false) {
  std::ostringstream os;
  os << '[';
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double x = angular_deg && i >= 3 ? v[i] / kDeg : v[i];
    os << (i ? ", " : "") << x;
  }
  os << ']';
  return os.str();
}

void describe_preset(std::ostream& os, const char* role, const ControllerPreset& p, bool servo) {
  os << role << ": preset " << p.name << '\n';
  os << "  kp " << vec(p.pid.kp) << "  ki " << vec(p.pid.ki) << "  kd " << vec(p.pid.kd) << '\n';
  os << "  integral clip [" << p.pid.integral_lo.minCoeff() << ", " << p.pid.integral_hi.maxCoeff()
     << "]  output clip [" << p.pid.output_lo.minCoeff() << ", " << p.pid.output_hi.maxCoeff()
     << "]  ewma decay " << p.pid.ewma_decay << '\n';
  if (servo) {
    os << "  reference X_fs' " << vec(p.reference_euler, true) << " (mm, deg)\n";
    os << "  feedforward " << vec(p.feedforward, true) << " (mm/s, deg/s)\n";
  }
}

}  // namespace

std::string summarize(const Config& c) {
  std::ostringstream os;
  os << "task: " << c.task << "\nseed: " << c.seed << "\nname: " << c.name << '\n';
  if (c.task == "filter_study") {
    const FilterStudyConfig& f = c.filter_study;
    os << "length: " << f.length << " steps\nsigma_psi:";
    for (double s : f.sigma_psi) os << ' ' << s;
    os << "\nobservation std " << vec(f.observation.std) << " (mm, rad), cov multiplier "
       << f.observation.cov_multiplier << '\n';
    return os.str();
  }
  if (c.task == "gen_dataset") {
    const SampleSpec& s = c.dataset.sample;
    os << "count: " << c.dataset.count << "\nsample: r_max " << s.r_max << " mm, z [" << s.z_min << ", " << s.z_max
       << "] mm, phi_max " << s.phi_max << " deg, gamma [" << s.gamma_min << ", " << s.gamma_max << "] deg\n";
    return os.str();
  }
  const sim::Scenario& s = c.scenario;
  os << "dt: " << s.dt << " s\nduration: " << s.duration << " s\ntransient: " << s.transient << " s\n";
  if (s.noise_free) {
    os << "observation: noise-free (filter bypassed)\n";
  } else {
    os << "observation std " << vec(s.observation.std) << " (mm, rad), cov multiplier "
       << s.observation.cov_multiplier << '\n';
    os << "filter: " << (s.use_filter ? "on" : "off") << ", sigma_phi " << s.sigma_phi << '\n';
  }
  os << "contact: tip radius " << s.contact.tip_radius << " mm, max depth " << s.contact.max_depth << " mm, "
     << (s.contact.slip_radius < 0 ? std::string("stick") : "slip " + std::to_string(s.contact.slip_radius) + " mm")
     << '\n';
  describe_preset(os, "controller", s.controller, true);
  switch (s.task) {
    case sim::TaskKind::Track: {
      const char* motion[] = {"periodic", "segments", "static"};
      os << "track: " << motion[static_cast<int>(s.track.motion)] << ", period " << s.track.periodic.period
         << " s, amplitude " << vec(s.track.periodic.amplitude, true) << " (mm, deg), steady state from "
         << s.track.steady_state_start << " s\n";
      break;
    }
    case sim::TaskKind::Follow: {
      const char* kinds[] = {"flat", "ramp", "hemisphere"};
      os << "follow: " << kinds[static_cast<int>(s.follow.surface)] << ", radius " << s.follow.radius
         << " mm (0 = default), speed " << s.follow.speed << " mm/s, directions";
      for (double d : s.follow.directions_deg) os << ' ' << d;
      os << " deg\n";
      break;
    }
    case sim::TaskKind::PushDual:
      describe_preset(os, "follower", s.follower, true);
      [[fallthrough]];
    case sim::TaskKind::PushSingle:
      describe_preset(os, "bearing", s.bearing, false);
      os << "push: object " << s.push.object.name << " (alpha " << s.push.object.alpha << ", r0 "
         << s.push.object.r0 << " mm, depth " << s.push.object.depth << " mm)"
         << (s.push.tall ? ", tall" : "") << "\n  start (" << s.push.start.x() << ", " << s.push.start.y()
         << ") mm, target (" << s.push.target.x() << ", " << s.push.target.y() << ") mm\n  switch-off radius "
         << s.push.switch_off_radius << " mm, termination radius " << s.push.termination_radius
         << " mm, bearing error in " << (s.push.bearing_in_degrees ? "deg" : "rad") << '\n';
      break;
  }
  return os.str();
}

}  // namespace se3ctl::cli
