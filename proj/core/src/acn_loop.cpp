#include "acn/acn_loop.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "acn/parallel.hpp"
#include "acn/td3.hpp"

namespace acn {

namespace {

// Sub-stream ids within one generation.
enum Stream : std::uint64_t { kEvaluate = 1, kSelect = 2, kMutate = 3, kTrain = 4, kReport = 5, kInit = 6 };

std::size_t worker_count(const RunConfig& cfg) { return cfg.threads > 0 ? cfg.threads : default_thread_count(); }

}  // namespace

std::vector<Individual> init_population(const RunConfig& cfg, const Environment& env, Rng& rng,
                                        std::uint64_t& next_lineage) {
  const EnvSpec& spec = env.spec();
  std::vector<Individual> pop;
  pop.reserve(cfg.ga.population_size);
  for (std::size_t i = 0; i < cfg.ga.population_size; ++i) {
    const std::uint64_t id = next_lineage++;
    Rng r = rng.split(id);
    Individual ind;
    ind.lineage_id = id;
    ind.actor = build_actor(cfg.hidden, spec.observation_dim, spec.action_dim, spec.action_bound, r);
    ind.critic = build_critic(cfg.hidden, spec.observation_dim, spec.action_dim, r);
    pop.push_back(std::move(ind));
  }
  return pop;
}

AcnState initial_state(const RunConfig& cfg) {
  AcnState state;
  state.config = cfg;
  state.config.finalize();
  const Rng master(cfg.seed);
  state.rng = master.state();
  auto env = make_environment(cfg.env);
  Rng init = master.split(0, kInit);
  state.population = init_population(state.config, *env, init, state.next_lineage);
  return state;
}

bool run_finished(const AcnState& state) {
  const RunConfig& cfg = state.config;
  if (cfg.generations && state.generation >= *cfg.generations) return true;
  return state.env_steps >= cfg.budget;
}

GenerationOutput run_generation(AcnState& state, ReplayMemory& replay, const Environment& env) {
  const auto started = std::chrono::steady_clock::now();
  const RunConfig& cfg = state.config;
  const GaConfig& ga = cfg.ga;
  const std::size_t threads = worker_count(cfg);
  const std::size_t gen = state.generation + 1;
  const Rng gen_rng = Rng(state.rng).split(gen);

  // Evaluate unevaluated individuals; their rollouts feed the replay memory.
  EvaluationResult evaluation =
      evaluate(state.population, env, ga, gen_rng.split(kEvaluate), EvaluateScope::kUnevaluated, threads);
  replay.push_batch(evaluation.transitions);
  state.env_steps += evaluation.env_steps;

  GenerationOutput out;
  GenerationRecord& rec = out.record;
  rec.generation = gen;
  rec.generation_env_steps = evaluation.env_steps;
  rec.env_steps = state.env_steps;

  const auto& pop = state.population;
  double sum = 0.0;
  for (const auto& ind : pop) sum += *ind.fitness;
  rec.mean_fitness = sum / static_cast<double>(pop.size());
  double var = 0.0;
  for (const auto& ind : pop) var += (*ind.fitness - rec.mean_fitness) * (*ind.fitness - rec.mean_fitness);
  rec.std_fitness = std::sqrt(var / static_cast<double>(pop.size()));
  for (const auto& ind : pop) {
    out.arch.push_back({gen, ind.lineage_id, ind.actor.spec().to_string(), ind.critic.spec().to_string(),
                        *ind.fitness});
  }

  std::vector<Individual> elites = top_k(pop, ga.elite_count());
  rec.best_fitness = *elites.front().fitness;
  rec.best_topology = elites.front().actor.spec().to_string();
  {
    // Noise-free reporting return of the best individual; common seeds for all.
    const std::uint64_t report_seed = Rng(state.rng).split(0, kReport)();
    std::vector<double> returns(pop.size());
    parallel_for(pop.size(), threads, [&](std::size_t i) {
      auto report_env = env.clone();
      returns[i] = evaluate_policy(*report_env, pop[i].actor, cfg.eval_episodes, report_seed).mean;
    });
    const auto best = std::max_element(returns.begin(), returns.end());
    rec.eval_return = *best;
    rec.eval_topology = pop[static_cast<std::size_t>(best - returns.begin())].actor.spec().to_string();
  }

  Rng select_rng = gen_rng.split(kSelect);
  const std::vector<ParentPair> parents = tournament_select(pop, ga, select_rng);

  const ReplaySnapshot snapshot = replay.snapshot();
  std::vector<MutationResult> mutated = mutate(parents, snapshot, ga, gen_rng.split(kMutate), threads);

  const std::size_t train_steps =
      cfg.train_steps ? *cfg.train_steps : std::max<std::size_t>(1, static_cast<std::size_t>(evaluation.env_steps));
  rec.train_steps = train_steps;

  std::vector<Individual> next(mutated.size());
  for (std::size_t i = 0; i < mutated.size(); ++i) {
    next[i].lineage_id = state.next_lineage++;
    if (mutated[i].kind != MutationKind::kSafeMutation) ++rec.grown_offspring;
  }
  const Rng train_rng = gen_rng.split(kTrain);
  parallel_for(mutated.size(), threads, [&](std::size_t i) {
    Rng r = train_rng.split(next[i].lineage_id);
    auto [actor, critic] = train_phase(std::move(mutated[i].actor), std::move(mutated[i].critic), replay,
                                       train_steps, cfg.td3, r);
    next[i].actor = std::move(actor);
    next[i].critic = std::move(critic);
  });

  for (auto& e : elites) next.push_back(std::move(e));
  state.population = std::move(next);
  state.generation = gen;

  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  state.records.push_back(rec);
  return out;
}

void continue_run(AcnState& state, ReplayMemory& replay,
                  const std::function<bool(const GenerationOutput&, const AcnState&)>& on_generation) {
  auto env = make_environment(state.config.env);
  while (!run_finished(state)) {
    const GenerationOutput out = run_generation(state, replay, *env);
    if (on_generation && !on_generation(out, state)) return;
  }
  state.completed = true;
}

RunResult run(const RunConfig& cfg) {
  RunResult result;
  result.final_state = initial_state(cfg);
  auto env = make_environment(result.final_state.config.env);
  ReplayMemory replay(env->spec().observation_dim, env->spec().action_dim, result.final_state.config.replay_capacity);
  continue_run(result.final_state, replay, [&](const GenerationOutput& out, const AcnState&) {
    result.arch.insert(result.arch.end(), out.arch.begin(), out.arch.end());
    return true;
  });
  result.records = result.final_state.records;
  return result;
}

}  // namespace acn
