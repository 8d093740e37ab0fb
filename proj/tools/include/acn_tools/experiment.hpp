#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace acn::tools {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfigError = 2,
  kExitNumericalError = 3,
};

struct TrainOptions {
  std::optional<std::filesystem::path> config_file;
  /// Applied in order after the config file, e.g. {"run.seed", "3"}.
  std::vector<std::pair<std::string, std::string>> overrides;
  std::optional<std::filesystem::path> out_dir;  // default: runs/<kind>_<env>_seed<seed>
  /// Stop after this many generations without marking the run complete.
  std::optional<std::size_t> halt_after;
};

int cmd_train(const TrainOptions& opts, std::ostream& log, std::ostream& err);

struct ReportOptions {
  std::vector<std::filesystem::path> run_dirs;
  std::filesystem::path summary_path = "summary.csv";
};

int cmd_report(const ReportOptions& opts, std::ostream& out, std::ostream& err);

int cmd_resume(const std::filesystem::path& checkpoint, std::optional<std::size_t> halt_after, std::ostream& log,
               std::ostream& err);

/// Full command-line entry point (train | report | resume).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// File names inside a run directory.
inline constexpr const char* kCurveFile = "curve.csv";
inline constexpr const char* kArchFile = "arch.csv";
inline constexpr const char* kResolvedFile = "config.resolved";
inline constexpr const char* kCheckpointFile = "checkpoint.json";
inline constexpr const char* kTd3CurveFile = "td3_curve.csv";
inline constexpr const char* kLockFile = ".lock";

}  // namespace acn::tools
