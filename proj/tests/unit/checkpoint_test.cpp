#include "acn/checkpoint.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "test_support.hpp"

namespace acn {
namespace {

namespace fs = std::filesystem;

AcnState advanced_state() {
  RunConfig cfg = test::tiny_run(3);
  cfg.generations = 2;
  return run(cfg).final_state;
}

void expect_equal(const AcnState& a, const AcnState& b, bool same_timing = true) {
  EXPECT_EQ(resolve_to_text(a.config), resolve_to_text(b.config));
  EXPECT_EQ(a.generation, b.generation);
  EXPECT_EQ(a.env_steps, b.env_steps);
  EXPECT_EQ(a.next_lineage, b.next_lineage);
  EXPECT_EQ(a.rng, b.rng);
  EXPECT_EQ(a.completed, b.completed);
  ASSERT_EQ(a.population.size(), b.population.size());
  for (std::size_t i = 0; i < a.population.size(); ++i) {
    EXPECT_EQ(a.population[i].fitness, b.population[i].fitness);
    EXPECT_EQ(a.population[i].lineage_id, b.population[i].lineage_id);
    EXPECT_EQ(a.population[i].actor, b.population[i].actor);
    EXPECT_EQ(a.population[i].critic, b.population[i].critic);
  }
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].env_steps, b.records[i].env_steps);
    EXPECT_EQ(a.records[i].best_fitness, b.records[i].best_fitness);
    EXPECT_EQ(a.records[i].mean_fitness, b.records[i].mean_fitness);
    EXPECT_EQ(a.records[i].eval_return, b.records[i].eval_return);
    EXPECT_EQ(a.records[i].eval_topology, b.records[i].eval_topology);
    if (same_timing) EXPECT_EQ(a.records[i].wall_seconds, b.records[i].wall_seconds);
  }
}

TEST(Checkpoint, RoundTripIsExact) {
  const AcnState s = advanced_state();
  const AcnState back = deserialize_checkpoint(serialize_checkpoint(s));
  expect_equal(s, back);
  EXPECT_EQ(serialize_checkpoint(back), serialize_checkpoint(s));
}

TEST(Checkpoint, InitialStateRoundTrip) {
  const AcnState s = initial_state(test::tiny_run(4));
  expect_equal(s, deserialize_checkpoint(serialize_checkpoint(s)));
}

TEST(Checkpoint, FileRoundTripAndNoTempLeftBehind) {
  const fs::path dir = fs::temp_directory_path() / "acn_checkpoint_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const AcnState s = advanced_state();
  save_checkpoint(dir / "c.json", s);
  expect_equal(s, load_checkpoint(dir / "c.json"));
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++files;
  EXPECT_EQ(files, 1u);
  fs::remove_all(dir);
}

TEST(Checkpoint, ResumedRunMatchesUninterruptedRun) {
  // Replay memory is not persisted, so compare against a run that also
  // restarts with an empty memory after generation 1.
  RunConfig cfg = test::tiny_run(5);
  AcnState a = initial_state(cfg);
  ReplayMemory m1(3, 1, cfg.replay_capacity);
  continue_run(a, m1, [](const GenerationOutput&, const AcnState&) { return false; });
  AcnState b = deserialize_checkpoint(serialize_checkpoint(a));
  ReplayMemory m2(3, 1, cfg.replay_capacity), m3(3, 1, cfg.replay_capacity);
  continue_run(a, m2);
  continue_run(b, m3);
  expect_equal(a, b, false);
}

TEST(Checkpoint, VersionMismatchRejected) {
  std::string text = serialize_checkpoint(initial_state(test::tiny_run()));
  const std::string key = "\"version\":" + std::to_string(kCheckpointVersion);
  const auto at = text.find(key);
  ASSERT_NE(at, std::string::npos);
  text.replace(at, key.size(), "\"version\":" + std::to_string(kCheckpointVersion + 1));
  EXPECT_THROW(deserialize_checkpoint(text), CheckpointVersionError);
}

TEST(Checkpoint, MalformedInputRejected) {
  EXPECT_THROW(deserialize_checkpoint("not json"), CheckpointError);
  EXPECT_THROW(deserialize_checkpoint("{\"format\":\"something-else\",\"version\":1}"), CheckpointError);
  std::string text = serialize_checkpoint(initial_state(test::tiny_run()));
  const auto at = text.find("\"shape\":[3,8]");
  ASSERT_NE(at, std::string::npos);
  text.replace(at, 13, "\"shape\":[3,9]");
  EXPECT_THROW(deserialize_checkpoint(text), CheckpointError);
  EXPECT_THROW(load_checkpoint("/nonexistent/acn/checkpoint.json"), CheckpointError);
}

}  // namespace
}  // namespace acn
