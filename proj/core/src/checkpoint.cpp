#include "acn/checkpoint.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace acn {

namespace {

using nlohmann::json;

constexpr const char* kFormatTag = "acn-checkpoint";

json mlp_to_json(const Mlp& net) {
  json params = json::array();
  for (std::size_t i = 0; i < net.params.size(); ++i) {
    const Tensor& t = net.params[i];
    params.push_back({{"name", net.params.name(i)}, {"shape", t.shape()}, {"data", t.data()}});
  }
  return {{"input_width", net.spec.input_width},
          {"hidden", net.spec.hidden},
          {"output_width", net.spec.output_width},
          {"head", net.head == Head::kTanh ? "tanh" : "identity"},
          {"params", std::move(params)}};
}

Mlp mlp_from_json(const json& j) {
  Mlp net;
  net.spec.input_width = j.at("input_width").get<std::size_t>();
  net.spec.hidden = j.at("hidden").get<HiddenWidths>();
  net.spec.output_width = j.at("output_width").get<std::size_t>();
  net.spec.validate();
  const std::string head = j.at("head").get<std::string>();
  if (head == "tanh") {
    net.head = Head::kTanh;
  } else if (head == "identity") {
    net.head = Head::kIdentity;
  } else {
    throw CheckpointError("unknown head '" + head + "'");
  }
  for (const json& p : j.at("params")) {
    net.params.add(p.at("name").get<std::string>(),
                   Tensor(p.at("shape").get<std::vector<std::size_t>>(), p.at("data").get<std::vector<double>>()));
  }
  const Mlp reference = [&] {
    Rng rng(0);
    return build_mlp(net.spec, net.head, rng);
  }();
  if (reference.params.size() != net.params.size()) throw CheckpointError("parameter count mismatch");
  for (std::size_t i = 0; i < net.params.size(); ++i) {
    if (reference.params.name(i) != net.params.name(i) || !reference.params[i].same_shape(net.params[i])) {
      throw CheckpointError("parameter layout mismatch at " + net.params.name(i));
    }
  }
  return net;
}

json individual_to_json(const Individual& ind) {
  json j = {{"lineage_id", ind.lineage_id},
            {"actor", mlp_to_json(ind.actor.net)},
            {"action_bound", ind.actor.action_bound},
            {"critic", json::array({mlp_to_json(ind.critic.heads[0]), mlp_to_json(ind.critic.heads[1])})},
            {"state_dim", ind.critic.state_dim},
            {"action_dim", ind.critic.action_dim}};
  j["fitness"] = ind.fitness ? json(*ind.fitness) : json(nullptr);
  return j;
}

Individual individual_from_json(const json& j) {
  Individual ind;
  ind.lineage_id = j.at("lineage_id").get<std::uint64_t>();
  if (!j.at("fitness").is_null()) ind.fitness = j.at("fitness").get<double>();
  ind.actor.net = mlp_from_json(j.at("actor"));
  ind.actor.action_bound = j.at("action_bound").get<std::vector<double>>();
  const json& heads = j.at("critic");
  if (!heads.is_array() || heads.size() != 2) throw CheckpointError("critic must have two heads");
  ind.critic.heads[0] = mlp_from_json(heads[0]);
  ind.critic.heads[1] = mlp_from_json(heads[1]);
  ind.critic.state_dim = j.at("state_dim").get<std::size_t>();
  ind.critic.action_dim = j.at("action_dim").get<std::size_t>();
  return ind;
}

json record_to_json(const GenerationRecord& r) {
  return {{"generation", r.generation},
          {"env_steps", r.env_steps},
          {"generation_env_steps", r.generation_env_steps},
          {"best_fitness", r.best_fitness},
          {"mean_fitness", r.mean_fitness},
          {"std_fitness", r.std_fitness},
          {"best_topology", r.best_topology},
          {"eval_return", r.eval_return},
          {"eval_topology", r.eval_topology},
          {"train_steps", r.train_steps},
          {"grown_offspring", r.grown_offspring},
          {"wall_seconds", r.wall_seconds}};
}

GenerationRecord record_from_json(const json& j) {
  GenerationRecord r;
  r.generation = j.at("generation").get<std::size_t>();
  r.env_steps = j.at("env_steps").get<std::uint64_t>();
  r.generation_env_steps = j.at("generation_env_steps").get<std::uint64_t>();
  r.best_fitness = j.at("best_fitness").get<double>();
  r.mean_fitness = j.at("mean_fitness").get<double>();
  r.std_fitness = j.at("std_fitness").get<double>();
  r.best_topology = j.at("best_topology").get<std::string>();
  r.eval_return = j.at("eval_return").get<double>();
  r.eval_topology = j.at("eval_topology").get<std::string>();
  r.train_steps = j.at("train_steps").get<std::size_t>();
  r.grown_offspring = j.at("grown_offspring").get<std::size_t>();
  r.wall_seconds = j.at("wall_seconds").get<double>();
  return r;
}

}  // namespace

std::string serialize_checkpoint(const AcnState& state) {
  json j;
  j["format"] = kFormatTag;
  j["version"] = kCheckpointVersion;
  j["config"] = resolve_to_text(state.config);
  j["generation"] = state.generation;
  j["env_steps"] = state.env_steps;
  j["next_lineage"] = state.next_lineage;
  j["rng"] = {{"key", state.rng.key}, {"counter", state.rng.counter}};
  j["completed"] = state.completed;
  json pop = json::array();
  for (const auto& ind : state.population) pop.push_back(individual_to_json(ind));
  j["population"] = std::move(pop);
  json records = json::array();
  for (const auto& r : state.records) records.push_back(record_to_json(r));
  j["records"] = std::move(records);
  return j.dump();
}

AcnState deserialize_checkpoint(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw CheckpointError(std::string("malformed checkpoint: ") + e.what());
  }
  if (!j.is_object() || j.value("format", "") != kFormatTag) throw CheckpointError("not a checkpoint file");
  const json& v = j.contains("version") ? j["version"] : json();
  if (!v.is_number_integer()) throw CheckpointError("checkpoint has no integer version");
  const int version = v.get<int>();
  if (version != kCheckpointVersion) {
    throw CheckpointVersionError("checkpoint version " + std::to_string(version) + " is not supported (expected " +
                                 std::to_string(kCheckpointVersion) + ")");
  }
  try {
    AcnState state;
    apply_config_text(state.config, j.at("config").get<std::string>());
    state.config.finalize();
    state.generation = j.at("generation").get<std::size_t>();
    state.env_steps = j.at("env_steps").get<std::uint64_t>();
    state.next_lineage = j.at("next_lineage").get<std::uint64_t>();
    state.rng.key = j.at("rng").at("key").get<std::uint64_t>();
    state.rng.counter = j.at("rng").at("counter").get<std::uint64_t>();
    state.completed = j.at("completed").get<bool>();
    for (const json& ind : j.at("population")) state.population.push_back(individual_from_json(ind));
    for (const json& r : j.at("records")) state.records.push_back(record_from_json(r));
    return state;
  } catch (const json::exception& e) {
    throw CheckpointError(std::string("malformed checkpoint: ") + e.what());
  } catch (const ConfigError& e) {
    throw CheckpointError(std::string("bad checkpoint config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw CheckpointError(std::string("inconsistent checkpoint: ") + e.what());
  }
}

void save_checkpoint(const std::filesystem::path& path, const AcnState& state) {
  const std::string text = serialize_checkpoint(state);
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CheckpointError("cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw CheckpointError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

AcnState load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize_checkpoint(buf.str());
}

}  // namespace acn
