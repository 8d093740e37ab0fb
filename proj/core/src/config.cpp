#include "acn/config.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <map>
#include <sstream>
#include <system_error>

namespace acn {

std::string to_string(RunKind kind) {
  switch (kind) {
    case RunKind::kAcn: return "acn";
    case RunKind::kAcnFixed: return "acn-fixed";
    case RunKind::kTd3: return "td3";
  }
  return "acn";
}

RunKind parse_run_kind(std::string_view text) {
  if (text == "acn") return RunKind::kAcn;
  if (text == "acn-fixed") return RunKind::kAcnFixed;
  if (text == "td3") return RunKind::kTd3;
  throw ConfigError("unknown run kind \"" + std::string(text) + "\" (expected acn, acn-fixed or td3)");
}

void RunConfig::finalize() {
  if (kind == RunKind::kAcnFixed) ga.growth_prob = 0.0;
  if (!is_known_environment(env)) throw ConfigError("unknown environment \"" + env + "\"");
  if (budget == 0) throw ConfigError("run.budget must be positive");
  for (std::size_t w : hidden) {
    if (w < 2) throw ConfigError("run.hidden widths must be >= 2 (layer normalization)");
  }
  try {
    TopologySpec{1, hidden, 1}.validate();
    ga.validate();
    td3.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (eval_interval == 0) throw ConfigError("run.eval_interval must be positive");
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const std::string t = trim(text);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError("invalid value \"" + std::string(text) + "\" for " + std::string(key));
  }
  return value;
}

std::size_t parse_size(std::string_view key, std::string_view text) { return parse_number<std::size_t>(key, text); }
double parse_real(std::string_view key, std::string_view text) { return parse_number<double>(key, text); }

std::optional<std::size_t> parse_optional_size(std::string_view key, std::string_view text, std::string_view unset) {
  if (trim(text) == unset) return std::nullopt;
  return parse_size(key, text);
}

HiddenWidths parse_widths(std::string_view key, std::string_view text) {
  try {
    return parse_hidden(text);
  } catch (const std::invalid_argument&) {
    throw ConfigError("invalid value \"" + std::string(text) + "\" for " + std::string(key));
  }
}

struct Field {
  std::function<void(RunConfig&, std::string_view key, std::string_view value)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define ACN_SIZE_FIELD(member)                                                                     \
  Field {                                                                                          \
    [](RunConfig& c, std::string_view k, std::string_view v) { c.member = parse_size(k, v); },     \
        [](const RunConfig& c) { return std::to_string(c.member); }                                \
  }
#define ACN_REAL_FIELD(member)                                                                     \
  Field {                                                                                          \
    [](RunConfig& c, std::string_view k, std::string_view v) { c.member = parse_real(k, v); },     \
        [](const RunConfig& c) { return format_double(c.member); }                                 \
  }

const std::map<std::string, Field, std::less<>>& registry() {
  static const std::map<std::string, Field, std::less<>> fields = {
      {"run.kind", {[](RunConfig& c, std::string_view, std::string_view v) { c.kind = parse_run_kind(trim(v)); },
                    [](const RunConfig& c) { return to_string(c.kind); }}},
      {"run.env", {[](RunConfig& c, std::string_view, std::string_view v) {
                     c.env = trim(v);
                     if (!is_known_environment(c.env)) throw ConfigError("unknown environment \"" + c.env + "\"");
                   },
                   [](const RunConfig& c) { return c.env; }}},
      {"run.seed", {[](RunConfig& c, std::string_view k, std::string_view v) { c.seed = parse_number<std::uint64_t>(k, v); },
                    [](const RunConfig& c) { return std::to_string(c.seed); }}},
      {"run.budget", {[](RunConfig& c, std::string_view k, std::string_view v) { c.budget = parse_number<std::uint64_t>(k, v); },
                      [](const RunConfig& c) { return std::to_string(c.budget); }}},
      {"run.generations", {[](RunConfig& c, std::string_view k, std::string_view v) { c.generations = parse_optional_size(k, v, "none"); },
                           [](const RunConfig& c) { return c.generations ? std::to_string(*c.generations) : std::string("none"); }}},
      {"run.train_steps", {[](RunConfig& c, std::string_view k, std::string_view v) { c.train_steps = parse_optional_size(k, v, "auto"); },
                           [](const RunConfig& c) { return c.train_steps ? std::to_string(*c.train_steps) : std::string("auto"); }}},
      {"run.threads", ACN_SIZE_FIELD(threads)},
      {"run.eval_episodes", ACN_SIZE_FIELD(eval_episodes)},
      {"run.hidden", {[](RunConfig& c, std::string_view k, std::string_view v) { c.hidden = parse_widths(k, v); },
                      [](const RunConfig& c) { return format_hidden(c.hidden); }}},
      {"run.replay_capacity", ACN_SIZE_FIELD(replay_capacity)},
      {"run.warmup_steps", ACN_SIZE_FIELD(warmup_steps)},
      {"run.reinit_mode", {[](RunConfig& c, std::string_view, std::string_view v) {
                             try {
                               c.reinit = parse_reinit_mode(trim(v));
                             } catch (const std::invalid_argument& e) {
                               throw ConfigError(e.what());
                             }
                           },
                           [](const RunConfig& c) { return to_string(c.reinit); }}},
      {"run.reinit_interval", ACN_SIZE_FIELD(reinit_interval)},
      {"run.eval_interval", ACN_SIZE_FIELD(eval_interval)},
      {"ga.population_size", ACN_SIZE_FIELD(ga.population_size)},
      {"ga.elite_fraction", ACN_REAL_FIELD(ga.elite_fraction)},
      {"ga.tournament_size", ACN_SIZE_FIELD(ga.tournament_size)},
      {"ga.growth_prob", ACN_REAL_FIELD(ga.growth_prob)},
      {"ga.add_layer_prob", ACN_REAL_FIELD(ga.add_layer_prob)},
      {"ga.node_counts", {[](RunConfig& c, std::string_view k, std::string_view v) { c.ga.node_counts = parse_widths(k, v); },
                          [](const RunConfig& c) { return format_hidden(c.ga.node_counts); }}},
      {"ga.distill_updates", ACN_SIZE_FIELD(ga.distill_updates)},
      {"ga.distill_batch", ACN_SIZE_FIELD(ga.distill_batch)},
      {"ga.distill_optimizer", {[](RunConfig& c, std::string_view, std::string_view v) {
                                  try {
                                    c.ga.distill_optimizer = parse_distill_optimizer(trim(v));
                                  } catch (const std::invalid_argument& e) {
                                    throw ConfigError(e.what());
                                  }
                                },
                                [](const RunConfig& c) { return to_string(c.ga.distill_optimizer); }}},
      {"ga.distill_step_size", ACN_REAL_FIELD(ga.distill_step_size)},
      {"ga.safe_mutation_batch", ACN_SIZE_FIELD(ga.safe_mutation_batch)},
      {"ga.mutation_std", ACN_REAL_FIELD(ga.mutation_std)},
      {"ga.sensitivity_floor", ACN_REAL_FIELD(ga.sensitivity_floor)},
      {"ga.rollouts_per_eval", ACN_SIZE_FIELD(ga.rollouts_per_eval)},
      {"ga.eval_exploration_std", ACN_REAL_FIELD(ga.eval_exploration_std)},
      {"td3.discount", ACN_REAL_FIELD(td3.discount)},
      {"td3.tau", ACN_REAL_FIELD(td3.tau)},
      {"td3.target_noise", ACN_REAL_FIELD(td3.target_noise)},
      {"td3.noise_clip", ACN_REAL_FIELD(td3.noise_clip)},
      {"td3.policy_delay", ACN_SIZE_FIELD(td3.policy_delay)},
      {"td3.batch_size", ACN_SIZE_FIELD(td3.batch_size)},
      {"td3.actor_step_size", ACN_REAL_FIELD(td3.actor_step_size)},
      {"td3.critic_step_size", ACN_REAL_FIELD(td3.critic_step_size)},
      {"td3.exploration_std", ACN_REAL_FIELD(td3.exploration_std)},
  };
  return fields;
}

#undef ACN_SIZE_FIELD
#undef ACN_REAL_FIELD

}  // namespace

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& [k, _] : registry()) keys.push_back(k);
  return keys;
}

bool is_config_key(std::string_view key) { return registry().find(key) != registry().end(); }

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value) {
  const auto it = registry().find(trim(key));
  if (it == registry().end()) throw ConfigError("unknown configuration key \"" + std::string(key) + "\"");
  it->second.set(cfg, it->first, value);
}

std::string get_setting(const RunConfig& cfg, std::string_view key) {
  const auto it = registry().find(key);
  if (it == registry().end()) throw ConfigError("unknown configuration key \"" + std::string(key) + "\"");
  return it->second.get(cfg);
}

void apply_config_text(RunConfig& cfg, std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key=value, got \"" + t + "\"");
    }
    apply_setting(cfg, trim(std::string_view(t).substr(0, eq)), std::string_view(t).substr(eq + 1));
  }
}

std::string resolve_to_text(const RunConfig& cfg) {
  std::string out;
  for (const auto& [key, field] : registry()) out += key + "=" + field.get(cfg) + "\n";
  return out;
}

}  // namespace acn
