#include <CLI11.hpp>

#include <ostream>
#include <string>
#include <vector>

#include "acn/config.hpp"
#include "acn_tools/experiment.hpp"

#ifndef ACN_VERSION
#define ACN_VERSION "0.0.0"
#endif

namespace acn::tools {

namespace {

// Turns leftover "--key=value" / "--key value" tokens into config overrides.
std::vector<std::pair<std::string, std::string>> parse_overrides(const std::vector<std::string>& extras) {
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const std::string& tok = extras[i];
    if (tok.rfind("--", 0) != 0) throw ConfigError("unexpected argument \"" + tok + "\"");
    std::string key = tok.substr(2);
    std::string value;
    if (const auto eq = key.find('='); eq != std::string::npos) {
      value = key.substr(eq + 1);
      key.resize(eq);
    } else if (i + 1 < extras.size() && extras[i + 1].rfind("--", 0) != 0) {
      value = extras[++i];
    } else {
      throw ConfigError("missing value for --" + key);
    }
    if (!is_config_key(key)) throw ConfigError("unknown configuration key \"" + key + "\"");
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Actor-critic neuroevolution experiments"};
  app.name("acn");
  app.set_version_flag("--version", std::string("acn ") + ACN_VERSION);
  app.require_subcommand(1);

  TrainOptions train;
  std::string config_path, kind, env, out_dir;
  std::string seed, budget;
  std::size_t halt_after = 0;
  auto* train_cmd = app.add_subcommand("train", "Run an experiment (acn, acn-fixed or td3)");
  train_cmd->add_option("--config", config_path, "key=value configuration file");
  train_cmd->add_option("--kind", kind, "acn | acn-fixed | td3");
  train_cmd->add_option("--env", env, "pendulum | pointmass | integrator");
  train_cmd->add_option("--seed", seed, "Master seed");
  train_cmd->add_option("--budget", budget, "Environment-step budget");
  train_cmd->add_option("--out", out_dir, "Output directory (default runs/<kind>_<env>_seed<seed>)");
  train_cmd->add_option("--halt-after", halt_after, "Stop after N generations without completing the run");
  train_cmd->allow_extras();
  train_cmd->footer("Any configuration key can be overridden as --key=value, e.g. --ga.population_size=10.");

  ReportOptions report;
  std::vector<std::string> report_dirs;
  std::string summary_path = "summary.csv";
  auto* report_cmd = app.add_subcommand("report", "Summarize finished runs");
  report_cmd->add_option("runs", report_dirs, "Run directories")->required();
  report_cmd->add_option("--summary", summary_path, "Where to write the summary CSV");

  std::string checkpoint;
  std::size_t resume_halt = 0;
  auto* resume_cmd = app.add_subcommand("resume", "Continue a run from its checkpoint");
  resume_cmd->add_option("checkpoint", checkpoint, "Path to checkpoint.json")->required();
  resume_cmd->add_option("--halt-after", resume_halt, "Stop after N more generations");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfigError;
  }

  if (*train_cmd) {
    try {
      if (!config_path.empty()) train.config_file = config_path;
      if (!kind.empty()) train.overrides.emplace_back("run.kind", kind);
      if (!env.empty()) train.overrides.emplace_back("run.env", env);
      if (!seed.empty()) train.overrides.emplace_back("run.seed", seed);
      if (!budget.empty()) train.overrides.emplace_back("run.budget", budget);
      for (auto& kv : parse_overrides(train_cmd->remaining())) train.overrides.push_back(std::move(kv));
    } catch (const ConfigError& e) {
      err << "config error: " << e.what() << '\n';
      return kExitConfigError;
    }
    if (!out_dir.empty()) train.out_dir = out_dir;
    if (train_cmd->count("--halt-after")) train.halt_after = halt_after;
    return cmd_train(train, out, err);
  }
  if (*report_cmd) {
    report.run_dirs.assign(report_dirs.begin(), report_dirs.end());
    report.summary_path = summary_path;
    return cmd_report(report, out, err);
  }
  std::optional<std::size_t> halt;
  if (resume_cmd->count("--halt-after")) halt = resume_halt;
  return cmd_resume(checkpoint, halt, out, err);
}

}  // namespace acn::tools
