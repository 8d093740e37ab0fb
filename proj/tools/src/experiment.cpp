#include "acn_tools/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "acn/acn_loop.hpp"
#include "acn/checkpoint.hpp"
#include "acn/config.hpp"
#include "acn/errors.hpp"
#include "acn/td3.hpp"

namespace fs = std::filesystem;

namespace acn::tools {

namespace {

class LockError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exclusive marker file; concurrent commands on one directory fail fast.
class RunLock {
 public:
  explicit RunLock(const fs::path& dir) : path_(dir / kLockFile) {
    std::FILE* f = std::fopen(path_.c_str(), "wx");
    if (!f) {
      throw LockError("run directory " + dir.string() + " is locked by another process (remove " +
                      path_.string() + " if stale)");
    }
    std::fclose(f);
  }
  ~RunLock() {
    std::error_code ec;
    fs::remove(path_, ec);
  }
  RunLock(const RunLock&) = delete;
  RunLock& operator=(const RunLock&) = delete;

 private:
  fs::path path_;
};

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

// Appends lines to a CSV, writing the header only when the file is new.
class CsvAppender {
 public:
  CsvAppender(const fs::path& path, const std::string& header, bool truncate) {
    const bool fresh = truncate || !fs::exists(path) || fs::file_size(path) == 0;
    out_.open(path, fresh ? std::ios::trunc : std::ios::app);
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    if (fresh) out_ << header << '\n';
    out_.flush();
  }
  void row(const std::string& line) {
    out_ << line << '\n';
    out_.flush();
  }

 private:
  std::ofstream out_;
};

constexpr const char* kCurveHeader = "env_steps,best_fitness,mean_fitness,eval_return";
constexpr const char* kArchHeader = "generation,lineage_id,actor_topology,critic_topology,fitness";
constexpr const char* kTd3CurveHeader = "step,eval_return_mean,eval_return_std";

RunConfig resolve_config(const TrainOptions& opts) {
  RunConfig cfg;
  if (opts.config_file) {
    std::string text;
    try {
      text = read_file(*opts.config_file);
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
    apply_config_text(cfg, text);
  }
  for (const auto& [key, value] : opts.overrides) apply_setting(cfg, key, value);
  cfg.finalize();
  return cfg;
}

fs::path default_out_dir(const RunConfig& cfg) {
  return fs::path("runs") / (to_string(cfg.kind) + "_" + cfg.env + "_seed" + std::to_string(cfg.seed));
}

// Drives an ACN state to completion (or halt), streaming CSV rows and
// checkpointing after every generation.
int drive_acn(AcnState& state, const fs::path& dir, bool fresh, std::optional<std::size_t> halt_after,
              std::ostream& log, std::ostream& err) {
  const fs::path ckpt = dir / kCheckpointFile;
  CsvAppender curve(dir / kCurveFile, kCurveHeader, fresh);
  CsvAppender arch(dir / kArchFile, kArchHeader, fresh);

  auto env = make_environment(state.config.env);
  ReplayMemory replay(env->spec().observation_dim, env->spec().action_dim, state.config.replay_capacity);
  if (fresh) save_checkpoint(ckpt, state);

  AcnState last_good = state;
  std::size_t generations_now = 0;
  try {
    continue_run(state, replay, [&](const GenerationOutput& out, const AcnState& st) {
      const GenerationRecord& r = out.record;
      curve.row(std::to_string(r.env_steps) + "," + format_double(r.best_fitness) + "," +
                format_double(r.mean_fitness) + "," + format_double(r.eval_return));
      for (const ArchEntry& a : out.arch) {
        arch.row(std::to_string(a.generation) + "," + std::to_string(a.lineage_id) + "," + quoted(a.actor_topology) +
                 "," + quoted(a.critic_topology) + "," + format_double(a.fitness));
      }
      last_good = st;
      save_checkpoint(ckpt, st);
      log << "generation " << r.generation << "  env_steps " << r.env_steps << "  best " << std::fixed
          << std::setprecision(1) << r.best_fitness << "  mean " << r.mean_fitness << "  eval " << r.eval_return
          << "  topology " << r.best_topology << "  grown " << r.grown_offspring << "  " << std::setprecision(2)
          << r.wall_seconds << "s" << std::defaultfloat << '\n';
      ++generations_now;
      return !(halt_after && generations_now >= *halt_after);
    });
  } catch (const NumericalError& e) {
    save_checkpoint(ckpt, last_good);
    err << "numerical failure: " << e.what() << "\ncheckpoint of the last completed generation written to "
        << ckpt.string() << '\n';
    return kExitNumericalError;
  }
  save_checkpoint(ckpt, state);
  log << (state.completed ? "run complete" : "halted") << " after generation " << state.generation << " ("
      << state.env_steps << " env steps)\n";
  return kExitOk;
}

int train_td3(const RunConfig& cfg, const fs::path& dir, std::ostream& log, std::ostream& err) {
  BaselineConfig base;
  base.env = cfg.env;
  base.hidden = cfg.hidden;
  base.total_steps = static_cast<std::size_t>(cfg.budget);
  base.warmup_steps = cfg.warmup_steps;
  base.reinit = cfg.reinit;
  base.reinit_interval = cfg.reinit_interval;
  base.eval_interval = cfg.eval_interval;
  base.eval_episodes = cfg.eval_episodes;
  base.replay_capacity = cfg.replay_capacity;
  base.seed = cfg.seed;

  CsvAppender curve(dir / kCurveFile, kCurveHeader, true);
  CsvAppender arch(dir / kArchFile, kArchHeader, true);
  CsvAppender td3_curve(dir / kTd3CurveFile, kTd3CurveHeader, true);
  const std::string topology = format_hidden(cfg.hidden);
  std::size_t points = 0;
  BaselineHooks hooks;
  hooks.on_eval = [&](const CurvePoint& p) {
    ++points;
    // The single learner is its own population: best = mean = last exploration episode.
    curve.row(std::to_string(p.step) + "," + format_double(p.last_episode_return) + "," +
              format_double(p.last_episode_return) + "," + format_double(p.eval_return_mean));
    arch.row(std::to_string(points) + ",0," + quoted(topology) + "," + quoted(topology) + "," +
             format_double(p.last_episode_return));
    td3_curve.row(std::to_string(p.step) + "," + format_double(p.eval_return_mean) + "," +
                  format_double(p.eval_return_std));
    log << "step " << p.step << "  eval " << std::fixed << std::setprecision(1) << p.eval_return_mean << " +- "
        << p.eval_return_std << std::defaultfloat << '\n';
  };
  hooks.on_reinit = [&](std::size_t t, const TrainState&) {
    log << "re-initialized (" << to_string(cfg.reinit) << ") at step " << t << '\n';
  };

  BaselineResult result;
  try {
    result = run_td3_baseline(base, cfg.td3, hooks);
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumericalError;
  }

  AcnState state;
  state.config = cfg;
  state.generation = points;
  state.env_steps = cfg.budget;
  state.completed = true;
  Individual ind;
  ind.actor = std::move(result.actor);
  ind.critic = std::move(result.critic);
  if (!result.curve.empty()) ind.fitness = result.curve.back().eval_return_mean;
  state.population.push_back(std::move(ind));
  save_checkpoint(dir / kCheckpointFile, state);
  log << "run complete (" << cfg.budget << " env steps)\n";
  return kExitOk;
}

// ---- report ---------------------------------------------------------------

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool in_quotes = false;
  for (char c : line) {
    if (c == '"') {
      in_quotes = !in_quotes;
    } else if (c == ',' && !in_quotes) {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path, std::size_t columns) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("missing " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty " + path.string());
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != columns) throw std::runtime_error("malformed row in " + path.string() + ": " + line);
    rows.push_back(std::move(fields));
  }
  return rows;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::runtime_error("bad number \"" + s + "\"");
  return v;
}

struct RunSummary {
  std::string run;
  std::string kind = "?";
  std::string env = "?";
  std::string seed = "?";
  std::string group_key;
  double final_eval = 0.0;
  std::string best_topology;
  std::string env_steps;
  std::string group;
};

RunSummary summarize(const fs::path& dir) {
  RunSummary s;
  s.run = dir.string();
  const auto curve = read_csv(dir / kCurveFile, 4);
  const auto arch = read_csv(dir / kArchFile, 5);
  if (curve.empty()) throw std::runtime_error("no rows in " + (dir / kCurveFile).string());
  const std::size_t tail = std::min<std::size_t>(3, curve.size());
  double sum = 0.0;
  for (std::size_t i = curve.size() - tail; i < curve.size(); ++i) sum += to_double(curve[i][3]);
  s.final_eval = sum / static_cast<double>(tail);
  s.env_steps = curve.back()[0];
  if (!arch.empty()) {
    // Fittest individual of the last logged generation.
    const std::string last_gen = arch.back()[0];
    double best = -INFINITY;
    for (const auto& row : arch) {
      if (row[0] != last_gen) continue;
      const double f = to_double(row[4]);
      if (f > best) {
        best = f;
        s.best_topology = row[2];
      }
    }
  }
  if (fs::exists(dir / kResolvedFile)) {
    std::istringstream in(read_file(dir / kResolvedFile));
    std::string line;
    while (std::getline(in, line)) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = line.substr(0, eq);
      const std::string value = line.substr(eq + 1);
      if (key == "run.kind") s.kind = value;
      if (key == "run.env") s.env = value;
      if (key == "run.seed") {
        s.seed = value;
        continue;
      }
      if (key == "run.threads") continue;
      s.group_key += line + "\n";
    }
  } else {
    s.group_key = s.run;
  }
  return s;
}

}  // namespace

int cmd_train(const TrainOptions& opts, std::ostream& log, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = resolve_config(opts);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }
  const fs::path dir = opts.out_dir ? *opts.out_dir : default_out_dir(cfg);
  try {
    fs::create_directories(dir);
    RunLock lock(dir);
    write_file(dir / kResolvedFile, resolve_to_text(cfg));
    log << "run directory " << dir.string() << '\n';
    if (cfg.kind == RunKind::kTd3) return train_td3(cfg, dir, log, err);
    AcnState state = initial_state(cfg);
    return drive_acn(state, dir, true, opts.halt_after, log, err);
  } catch (const LockError& e) {
    err << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

int cmd_resume(const fs::path& checkpoint, std::optional<std::size_t> halt_after, std::ostream& log,
               std::ostream& err) {
  AcnState state;
  try {
    state = load_checkpoint(checkpoint);
  } catch (const CheckpointVersionError& e) {
    err << "cannot resume: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "cannot resume: " << e.what() << '\n';
    return kExitFailure;
  }
  const fs::path dir = checkpoint.has_parent_path() ? checkpoint.parent_path() : fs::path(".");
  try {
    RunLock lock(dir);
    const fs::path resolved = dir / kResolvedFile;
    if (fs::exists(resolved) && read_file(resolved) != resolve_to_text(state.config)) {
      err << "warning: " << resolved.string() << " differs from the checkpoint's configuration\n";
    }
    if (state.completed || run_finished(state) || state.config.kind == RunKind::kTd3) {
      if (!state.completed) {
        state.completed = true;
        save_checkpoint(checkpoint, state);
      }
      log << "run already complete (generation " << state.generation << ", " << state.env_steps
          << " env steps); nothing to do\n";
      return kExitOk;
    }
    log << "resuming " << dir.string() << " at generation " << state.generation
        << " (replay memory starts empty)\n";
    return drive_acn(state, dir, false, halt_after, log, err);
  } catch (const LockError& e) {
    err << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

int cmd_report(const ReportOptions& opts, std::ostream& out, std::ostream& err) {
  std::vector<RunSummary> runs;
  std::vector<std::string> skipped;
  for (const fs::path& dir : opts.run_dirs) {
    try {
      runs.push_back(summarize(dir));
    } catch (const std::exception& e) {
      skipped.push_back(dir.string() + ": " + e.what());
    }
  }

  // Runs sharing every resolved setting except the seed form one group.
  std::map<std::string, std::vector<std::size_t>> members;
  std::vector<std::string> order;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (!members.count(runs[i].group_key)) order.push_back(runs[i].group_key);
    members[runs[i].group_key].push_back(i);
  }
  std::map<std::string, int> label_uses;
  struct GroupStats {
    std::string label;
    std::size_t n = 0;
    double mean = 0.0;
    std::optional<double> stderr_;
  };
  std::map<std::string, GroupStats> stats;
  for (const std::string& key : order) {
    const auto& idx = members[key];
    const RunSummary& first = runs[idx.front()];
    std::string label = first.kind + ":" + first.env;
    if (const int n = label_uses[label]++; n > 0) label += "#" + std::to_string(n + 1);
    GroupStats g;
    g.label = label;
    g.n = idx.size();
    for (std::size_t i : idx) g.mean += runs[i].final_eval;
    g.mean /= static_cast<double>(g.n);
    if (g.n > 1) {
      double ss = 0.0;
      for (std::size_t i : idx) ss += (runs[i].final_eval - g.mean) * (runs[i].final_eval - g.mean);
      g.stderr_ = std::sqrt(ss / static_cast<double>(g.n - 1)) / std::sqrt(static_cast<double>(g.n));
    }
    for (std::size_t i : idx) runs[i].group = label;
    stats[key] = g;
  }

  std::ostringstream csv;
  csv << "run,group,kind,env,seed,final_eval_return,best_topology,total_env_steps,group_n,group_mean,group_stderr\n";
  for (const RunSummary& r : runs) {
    const GroupStats& g = stats[r.group_key];
    csv << quoted(r.run) << ',' << r.group << ',' << r.kind << ',' << r.env << ',' << r.seed << ','
        << format_double(r.final_eval) << ',' << quoted(r.best_topology) << ',' << r.env_steps << ',' << g.n << ','
        << format_double(g.mean) << ',' << (g.stderr_ ? format_double(*g.stderr_) : "") << '\n';
  }

  out << std::left << std::setw(36) << "run" << std::setw(16) << "group" << std::setw(6) << "seed" << std::right
      << std::setw(12) << "final_eval" << "  " << std::left << std::setw(16) << "best_topology" << std::right
      << std::setw(10) << "env_steps" << '\n';
  for (const RunSummary& r : runs) {
    out << std::left << std::setw(36) << r.run << std::setw(16) << r.group << std::setw(6) << r.seed << std::right
        << std::fixed << std::setprecision(1) << std::setw(12) << r.final_eval << "  " << std::left << std::setw(16)
        << r.best_topology << std::right << std::setw(10) << r.env_steps << std::defaultfloat << '\n';
  }
  out << '\n';
  for (const std::string& key : order) {
    const GroupStats& g = stats[key];
    out << std::left << std::setw(16) << g.label << std::right << " n=" << g.n << "  mean " << std::fixed
        << std::setprecision(1) << g.mean;
    if (g.stderr_) out << " +- " << *g.stderr_ << " (stderr)";
    out << std::defaultfloat << '\n';
  }

  try {
    write_file(opts.summary_path, csv.str());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  for (const std::string& s : skipped) err << "skipped " << s << '\n';
  return skipped.empty() && !runs.empty() ? kExitOk : kExitFailure;
}

}  // namespace acn::tools
