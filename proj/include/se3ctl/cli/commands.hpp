#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace se3ctl::cli {

/// Process exit codes.
enum ExitCode : int { kOk = 0, kFailure = 1, kConfigError = 2, kDivergence = 3 };

/// Environment variable naming the default output directory.
inline constexpr const char* kOutDirEnv = "SE3CTL_OUT_DIR";

struct Options {
  std::optional<std::uint64_t> seed;
  int trials = 1;
  std::optional<std::string> out_dir;
  std::optional<double> dt;
  bool quiet = false;
  int pairs = 1000;  ///< fusion-bench sample size
};

int cmd_run(const std::string& config_path, const Options& opt, std::ostream& out, std::ostream& err);
int cmd_validate(const std::string& config_path, const Options& opt, std::ostream& out, std::ostream& err);
int cmd_filter_study(const std::string& config_path, const Options& opt, std::ostream& out, std::ostream& err);
int cmd_gen_dataset(const std::string& config_path, const Options& opt, std::ostream& out, std::ostream& err);
int cmd_fusion_bench(const Options& opt, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to a subcommand.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace se3ctl::cli
