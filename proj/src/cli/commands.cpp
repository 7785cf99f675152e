#include "se3ctl/cli/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>
#include <vector>

#include "json.hpp"
#include "se3ctl/cli/config.hpp"
#include "se3ctl/errors.hpp"
#include "se3ctl/filter.hpp"
#include "se3ctl/uncertainty.hpp"

namespace se3ctl::cli {

namespace fs = std::filesystem;

namespace {

/// Config problems found after parsing (overrides) are reported the same way.
Config load_with_overrides(const std::string& path, const Options& opt) {
  Config c = load_config(path);
  if (opt.seed) {
    c.seed = *opt.seed;
    c.scenario.seed = *opt.seed;
  }
  if (opt.dt) {
    if (!c.is_simulation()) throw ConfigError("--dt applies only to simulation tasks");
    c.scenario.dt = *opt.dt;
    try {
      c.scenario.validate();
    } catch (const Error& e) {
      throw ConfigError(std::string("--dt: ") + e.what());
    }
  }
  if (opt.trials < 1) throw ConfigError("--trials must be >= 1");
  return c;
}

fs::path resolve_out_dir(const Config& c, const Options& opt) {
  if (opt.out_dir) return *opt.out_dir;
  if (!c.out_dir.empty()) return c.out_dir;
  if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
  return ".";
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << content;
  if (!f) throw std::runtime_error("write failed for " + p.string());
}

/// Runs `body`, mapping exceptions to exit codes with a one-line diagnostic.
template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DivergenceError& e) {
    err << "divergence: " << e.what() << '\n';
    return kDivergence;
  } catch (const Error& e) {
    err << "numerical error: " << e.what() << '\n';
    return kDivergence;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

struct MetricField {
  const char* name;
  double sim::Metrics::*member;
};

constexpr MetricField kMetricFields[] = {
    {"final_target_error_mm", &sim::Metrics::final_target_error_mm},
    {"final_tip_distance_mm", &sim::Metrics::final_tip_distance_mm},
    {"mean_depth_error_mm", &sim::Metrics::mean_depth_error_mm},
    {"max_depth_error_mm", &sim::Metrics::max_depth_error_mm},
    {"mean_normal_angle_deg", &sim::Metrics::mean_normal_angle_deg},
    {"max_normal_angle_deg", &sim::Metrics::max_normal_angle_deg},
    {"mean_pose_error_mm", &sim::Metrics::mean_pose_error_mm},
    {"max_pose_error_mm", &sim::Metrics::max_pose_error_mm},
    {"mean_pose_error_deg", &sim::Metrics::mean_pose_error_deg},
    {"max_pose_error_deg", &sim::Metrics::max_pose_error_deg},
    {"tracking_lag_s", &sim::Metrics::tracking_lag_s},
    {"follower_mean_depth_error_mm", &sim::Metrics::follower_mean_depth_error_mm},
    {"follower_max_depth_error_mm", &sim::Metrics::follower_max_depth_error_mm},
    {"min_stability_margin", &sim::Metrics::min_stability_margin},
    {"net_displacement_mm", &sim::Metrics::net_displacement_mm},
    {"runtime_s", &sim::Metrics::runtime_s},
};

/// Sample mean and standard deviation over the finite entries.
std::pair<double, double> mean_std(const std::vector<double>& v) {
  std::vector<double> f;
  for (double x : v) {
    if (std::isfinite(x)) f.push_back(x);
  }
  if (f.empty()) return {NAN, NAN};
  double m = 0.0;
  for (double x : f) m += x;
  m /= static_cast<double>(f.size());
  double s = 0.0;
  for (double x : f) s += (x - m) * (x - m);
  s = f.size() > 1 ? std::sqrt(s / static_cast<double>(f.size() - 1)) : 0.0;
  return {m, s};
}

std::string trial_line(const sim::Metrics& m) {
  std::ostringstream os;
  os << std::setprecision(4) << m.status;
  for (const MetricField& f : kMetricFields) {
    const double v = m.*f.member;
    if (std::isfinite(v) && std::string(f.name) != "runtime_s" && std::string(f.name).rfind("max_", 0) != 0) {
      os << ' ' << f.name << '=' << v;
    }
  }
  return os.str();
}

int run_simulation(const Config& c, const Options& opt, std::ostream& out) {
  const int n = opt.trials;
  std::vector<sim::ScenarioResult> results(static_cast<std::size_t>(n));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
  std::atomic<int> next{0};
  const auto worker = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        Rng rng = make_rng(c.seed + static_cast<std::uint64_t>(i));
        results[static_cast<std::size_t>(i)] = sim::run_scenario(c.scenario, rng);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  const int workers = std::max(1, std::min<int>(n, static_cast<int>(std::thread::hardware_concurrency())));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  const fs::path dir = resolve_out_dir(c, opt);
  fs::create_directories(dir);
  for (int i = 0; i < n; ++i) {
    const std::string stem = n == 1 ? c.name : c.name + ".trial" + std::to_string(i);
    std::ostringstream csv;
    sim::write_trajectory_csv(csv, results[static_cast<std::size_t>(i)].log);
    write_file(dir / (stem + ".csv"), csv.str());
    write_file(dir / (stem + ".json"), sim::metrics_json(results[static_cast<std::size_t>(i)].metrics) + "\n");
    if (!opt.quiet) {
      out << "trial " << i << " (seed " << c.seed + static_cast<std::uint64_t>(i)
          << "): " << trial_line(results[static_cast<std::size_t>(i)].metrics) << '\n';
    }
  }
  if (n > 1) {
    nlohmann::ordered_json summary;
    summary["task"] = c.task;
    summary["trials"] = n;
    summary["seed"] = c.seed;
    std::map<std::string, int> statuses;
    int settled = 0;
    for (const auto& r : results) {
      ++statuses[r.metrics.status];
      settled += r.metrics.settled ? 1 : 0;
    }
    summary["status_counts"] = statuses;
    summary["settled"] = settled;
    for (const MetricField& f : kMetricFields) {
      std::vector<double> v;
      for (const auto& r : results) v.push_back(r.metrics.*f.member);
      const auto [m, s] = mean_std(v);
      if (!std::isfinite(m)) continue;
      summary[f.name] = {{"mean", m}, {"std", s}};
      if (!opt.quiet) out << f.name << ": " << std::setprecision(4) << m << " +- " << s << '\n';
    }
    write_file(dir / (c.name + ".summary.json"), summary.dump(2) + "\n");
  }
  if (!opt.quiet) out << "wrote " << (dir / c.name).string() << ".*\n";
  return kOk;
}

std::string filter_study_csv(const std::vector<StudyRow>& rows) {
  std::ostringstream os;
  os << "sigma_psi,x,y,z,alpha,beta,gamma\n" << std::setprecision(10);
  for (const StudyRow& r : rows) {
    if (std::isinf(r.sigma_psi)) os << "inf";
    else os << r.sigma_psi;
    for (int i = 0; i < 6; ++i) os << ',' << r.mae[i];
    os << '\n';
  }
  return os.str();
}

int run_filter_study(const Config& c, const Options& opt, std::ostream& out) {
  const FilterStudyConfig& f = c.filter_study;
  Rng rng = make_rng(c.seed);
  const sim::StudySequence seq = sim::make_study_sequence(f.length, f.observation, f.sample, rng);
  const std::vector<StudyRow> rows = filter_study(seq.truth, seq.observations, f.sigma_psi, c.seed);
  const std::string csv = filter_study_csv(rows);
  const fs::path dir = resolve_out_dir(c, opt);
  fs::create_directories(dir);
  write_file(dir / (c.name + ".csv"), csv);
  if (!opt.quiet) out << csv << "wrote " << (dir / (c.name + ".csv")).string() << '\n';
  return kOk;
}

int run_gen_dataset(const Config& c, const Options& opt, std::ostream& out) {
  Rng rng = make_rng(c.seed);
  std::ostringstream os;
  os << "x,y,z,alpha,beta,gamma,xi0,xi1,xi2,xi3,xi4,xi5\n" << std::setprecision(10);
  for (std::size_t i = 0; i < c.dataset.count; ++i) {
    const Vector6 e = sample_contact_pose(c.dataset.sample, rng);
    const Twist xi = label_pipeline(e);
    for (int k = 0; k < 6; ++k) os << e[k] << ',';
    for (int k = 0; k < 6; ++k) os << xi[k] << (k == 5 ? '\n' : ',');
  }
  const fs::path dir = resolve_out_dir(c, opt);
  fs::create_directories(dir);
  write_file(dir / (c.name + ".csv"), os.str());
  if (!opt.quiet) out << "wrote " << c.dataset.count << " samples to " << (dir / (c.name + ".csv")).string() << '\n';
  return kOk;
}

Matrix6 random_spd(Rng& rng, double lo, double hi) {
  Matrix6 a;
  for (int i = 0; i < 6; ++i) a.col(i) = standard_normal6(rng);
  const Eigen::HouseholderQR<Matrix6> qr(a);
  const Matrix6 q = qr.householderQ();
  Vector6 ev;
  for (int i = 0; i < 6; ++i) ev[i] = std::exp(uniform(rng, std::log(lo), std::log(hi)));
  return q * ev.asDiagonal() * q.transpose();
}

}  // namespace

int cmd_run(const std::string& config_path, const Options& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Config c = load_with_overrides(config_path, opt);
    if (c.task == "filter_study") return run_filter_study(c, opt, out);
    if (c.task == "gen_dataset") return run_gen_dataset(c, opt, out);
    return run_simulation(c, opt, out);
  });
}

int cmd_validate(const std::string& config_path, const Options& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Config c = load_with_overrides(config_path, opt);
    out << summarize(c);
    return kOk;
  });
}

int cmd_filter_study(const std::string& config_path, const Options& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Config c = load_with_overrides(config_path, opt);
    if (c.task != "filter_study") throw ConfigError(config_path + ": task must be filter_study");
    return run_filter_study(c, opt, out);
  });
}

int cmd_gen_dataset(const std::string& config_path, const Options& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Config c = load_with_overrides(config_path, opt);
    if (c.task != "gen_dataset") throw ConfigError(config_path + ": task must be gen_dataset");
    return run_gen_dataset(c, opt, out);
  });
}

int cmd_fusion_bench(const Options& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opt.pairs < 1) throw ConfigError("--pairs must be >= 1");
    const std::uint64_t seed = opt.seed.value_or(0);
    Rng rng = make_rng(seed);
    FuseOptions fo;
    fo.iterations = 10;
    std::map<int, int> histogram;  // iterations to reach |mu*'| < 1e-10; 0 = not reached
    std::vector<double> micros;
    for (int p = 0; p < opt.pairs; ++p) {
      const PoseGaussian a{exp(0.3 * standard_normal6(rng)), random_spd(rng, 1e-4, 1e-2)};
      const PoseGaussian b{exp(0.05 * standard_normal6(rng)) * a.mean, random_spd(rng, 1e-4, 1e-2)};
      const auto t0 = std::chrono::steady_clock::now();
      const FuseReport rep = fuse_detailed(a, b, fo);
      const auto t1 = std::chrono::steady_clock::now();
      micros.push_back(std::chrono::duration<double, std::micro>(t1 - t0).count());
      int reached = 0;
      for (std::size_t i = 0; i < rep.step_norms.size(); ++i) {
        if (rep.step_norms[i] < 1e-10) {
          reached = static_cast<int>(i) + 1;
          break;
        }
      }
      ++histogram[reached];
    }
    std::sort(micros.begin(), micros.end());
    const double median = micros[micros.size() / 2];
    const double p95 = micros[std::min(micros.size() - 1, micros.size() * 95 / 100)];

    nlohmann::ordered_json j;
    j["pairs"] = opt.pairs;
    j["seed"] = seed;
    j["iterations_per_fusion"] = fo.iterations;
    j["median_us"] = median;
    j["p95_us"] = p95;
    nlohmann::ordered_json h;
    for (const auto& [k, v] : histogram) h[k == 0 ? std::string("not_converged") : std::to_string(k)] = v;
    j["convergence_histogram"] = h;
    Config dummy;
    const fs::path dir = resolve_out_dir(dummy, opt);
    fs::create_directories(dir);
    write_file(dir / "fusion_bench.json", j.dump(2) + "\n");
    if (!opt.quiet) {
      out << "fusion of " << opt.pairs << " pairs: median " << std::setprecision(4) << median << " us, p95 " << p95
          << " us\niterations to |mu*'| < 1e-10:\n";
      for (const auto& [k, v] : histogram) {
        out << "  " << (k == 0 ? std::string(">") + std::to_string(fo.iterations) : std::to_string(k)) << ": " << v
            << '\n';
      }
    }
    return kOk;
  });
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"SE(3) tactile servoing toolkit: simulation, filter study, fusion benchmark, datasets"};
  app.require_subcommand(1);
  Options opt;
  std::string config;
  std::uint64_t seed = 0;
  std::string out_dir;
  double dt = 0.0;

  const auto common = [&](CLI::App* sub, bool with_config) {
    if (with_config) sub->add_option("config", config, "YAML config file")->required();
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_option("--out-dir", out_dir, std::string("output directory (default: config out_dir, then $") +
                                              kOutDirEnv + ", then .)");
    sub->add_flag("--quiet", opt.quiet, "suppress progress output");
  };
  CLI::App* run = app.add_subcommand("run", "run a scenario and write CSV + JSON");
  common(run, true);
  run->add_option("--trials", opt.trials, "independent trials (seeds seed+i), run concurrently")
      ->check(CLI::PositiveNumber);
  run->add_option("--dt", dt, "override the control period (s)")->check(CLI::PositiveNumber);
  CLI::App* validate = app.add_subcommand("validate", "check a config and print the resolved settings");
  common(validate, true);
  CLI::App* study = app.add_subcommand("filter-study", "filter MAE over a sigma_psi grid");
  common(study, true);
  CLI::App* bench = app.add_subcommand("fusion-bench", "timing and convergence of pose fusion");
  common(bench, false);
  bench->add_option("--pairs", opt.pairs, "random Gaussian pairs")->check(CLI::PositiveNumber);
  CLI::App* gen = app.add_subcommand("gen-dataset", "synthetic contact-pose dataset");
  common(gen, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }
  for (CLI::App* sub : {run, validate, study, bench, gen}) {
    if (sub->count("--seed")) opt.seed = seed;
    if (sub->count("--out-dir")) opt.out_dir = out_dir;
  }
  if (run->count("--dt")) opt.dt = dt;

  if (*run) return cmd_run(config, opt, out, err);
  if (*validate) return cmd_validate(config, opt, out, err);
  if (*study) return cmd_filter_study(config, opt, out, err);
  if (*bench) return cmd_fusion_bench(opt, out, err);
  return cmd_gen_dataset(config, opt, out, err);
}

}  // namespace se3ctl::cli
