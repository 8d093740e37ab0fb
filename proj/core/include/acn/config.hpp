#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "acn/evolution.hpp"
#include "acn/td3.hpp"
#include "acn/topology.hpp"

namespace acn {

enum class RunKind { kAcn, kAcnFixed, kTd3 };
std::string to_string(RunKind kind);
RunKind parse_run_kind(std::string_view text);

/// Everything that determines a run's results. Serialized as flat dotted
/// key=value lines (ga.population_size=20).
struct RunConfig {
  RunKind kind = RunKind::kAcn;
  std::string env = "pendulum";
  std::uint64_t seed = 1;
  std::uint64_t budget = 100'000;             // environment steps
  std::optional<std::size_t> generations;     // optional cap
  std::optional<std::size_t> train_steps;     // per offspring per generation; unset = auto
  std::size_t threads = 0;                    // 0 = ACN_THREADS or hardware
  std::size_t eval_episodes = 10;             // noise-free reporting episodes
  HiddenWidths hidden = {64};                 // initial (acn) or fixed (td3) hidden widths
  std::size_t replay_capacity = 1'000'000;
  std::size_t warmup_steps = 1'000;           // td3 only
  ReinitMode reinit = ReinitMode::kNone;      // td3 only
  std::size_t reinit_interval = 10'000;       // td3 only
  std::size_t eval_interval = 1'000;          // td3 only
  GaConfig ga;
  Td3Config td3;

  /// Applies kind-implied settings (acn-fixed disables growth) and validates.
  void finalize();
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// All recognised keys, sorted.
std::vector<std::string> config_keys();
bool is_config_key(std::string_view key);

/// Sets one field. Throws ConfigError for unknown keys or unparsable values.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);
std::string get_setting(const RunConfig& cfg, std::string_view key);

/// key=value lines; blank lines and '#' comments ignored.
void apply_config_text(RunConfig& cfg, std::string_view text);

/// Every key, sorted, one "key=value" per line. Feeding this back through
/// apply_config_text reproduces the same text.
std::string resolve_to_text(const RunConfig& cfg);

/// Shortest round-trip, locale-independent decimal form.
std::string format_double(double v);

}  // namespace acn
