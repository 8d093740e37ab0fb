#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "acn/config.hpp"
#include "acn/envs.hpp"
#include "acn/evolution.hpp"
#include "acn/replay.hpp"
#include "acn/rng.hpp"

namespace acn {

struct GenerationRecord {
  std::size_t generation = 0;       // 1-based
  std::uint64_t env_steps = 0;      // cumulative, evaluation rollouts only
  std::uint64_t generation_env_steps = 0;
  double best_fitness = 0.0;
  double mean_fitness = 0.0;
  double std_fitness = 0.0;
  std::string best_topology;
  double eval_return = 0.0;         // best noise-free mean return in the population
  std::string eval_topology;        // actor topology achieving eval_return
  std::size_t train_steps = 0;      // per offspring; auto = this generation's env steps
  std::size_t grown_offspring = 0;
  double wall_seconds = 0.0;
};

/// One row per evaluated individual per generation.
struct ArchEntry {
  std::size_t generation = 0;
  std::uint64_t lineage_id = 0;
  std::string actor_topology;
  std::string critic_topology;
  double fitness = 0.0;
};

/// Complete resumable state of an ACN run, minus the replay memory.
struct AcnState {
  RunConfig config;
  std::size_t generation = 0;     // generations completed
  std::uint64_t env_steps = 0;
  std::uint64_t next_lineage = 0;
  RngState rng;                   // master stream; per-generation streams split from it
  std::vector<Individual> population;
  std::vector<GenerationRecord> records;
  bool completed = false;
};

/// Population of hidden spec cfg.hidden, He-initialized, fitness unset.
std::vector<Individual> init_population(const RunConfig& cfg, const Environment& env, Rng& rng,
                                        std::uint64_t& next_lineage);

AcnState initial_state(const RunConfig& cfg);

struct GenerationOutput {
  GenerationRecord record;
  std::vector<ArchEntry> arch;
};

/// One pass of the generational loop: evaluate unevaluated individuals into
/// the replay memory, keep the elite, select, mutate, train offspring, and
/// replace the population with offspring plus elite.
GenerationOutput run_generation(AcnState& state, ReplayMemory& replay, const Environment& env);

/// True once the env-step budget or the generation cap is reached.
bool run_finished(const AcnState& state);

/// Drives run_generation from `state` until finished. `on_generation` fires
/// after each generation; returning false stops early without marking the
/// run completed.
void continue_run(AcnState& state, ReplayMemory& replay,
                  const std::function<bool(const GenerationOutput&, const AcnState&)>& on_generation = {});

struct RunResult {
  std::vector<GenerationRecord> records;
  std::vector<ArchEntry> arch;
  AcnState final_state;
};

RunResult run(const RunConfig& cfg);

}  // namespace acn
