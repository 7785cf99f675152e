#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "se3ctl/gdnmath.hpp"
#include "se3ctl/sim/observation.hpp"
#include "se3ctl/sim/scenario.hpp"

namespace se3ctl::cli {

/// Synthetic filter evaluation: independent contact poses, noisy observations.
struct FilterStudyConfig {
  std::size_t length = 2000;
  std::vector<double> sigma_psi = {std::numeric_limits<double>::infinity(), 10.0, 1.0, 0.1, 0.01};
  sim::ObservationModel observation = sim::ObservationModel::desk_scale();
  SampleSpec sample;
};

/// Synthetic contact-pose dataset: Euler labels and their exponential coordinates.
struct DatasetConfig {
  std::size_t count = 1000;
  SampleSpec sample;
};

struct Config {
  std::string task;  ///< track | follow | push_single | push_dual | filter_study | gen_dataset
  std::uint64_t seed = 0;
  std::string name;     ///< output file stem; defaults to the task name
  std::string out_dir;  ///< empty: use --out-dir, then SE3CTL_OUT_DIR, then "."
  sim::Scenario scenario;
  FilterStudyConfig filter_study;
  DatasetConfig dataset;

  bool is_simulation() const;
};

/// Parses and validates a YAML config. Throws ConfigError with "source:line:col: message".
Config parse_config(const std::string& text, const std::string& source = "<string>");
Config load_config(const std::string& path);

/// Human-readable resolved configuration with units.
std::string summarize(const Config& c);

}  // namespace se3ctl::cli
