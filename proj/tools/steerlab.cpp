#include <iostream>

#include <CLI11.hpp>

#include "steerlab/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Collision-model steering toolkit"};
  app.set_version_flag("--version", std::string(steerlab::kVersion));
  app.require_subcommand(1);

  steerlab::CommandLine cmd;
  std::string config, out, mode;
  std::uint64_t seed = 0;
  std::int64_t shots = 0;
  int bootstrap = 0;
  std::vector<std::string> inputs;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "run configuration (JSON)")->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "random seed (overrides the config)");
    sub->add_option("--out", out, "output directory (overrides the config)");
    sub->add_option("--mode", mode, "lower-bound mode")->check(CLI::IsMember({"projective3", "full9"}));
    sub->add_option("--shots", shots, "shots per circuit (overrides the config)");
    sub->add_option("--input", inputs, "input file(s) of the stage");
  };
  for (const char* name : {"simulate", "sample", "tomo", "sw", "lb", "find-strategy", "plot"}) {
    CLI::App* sub = app.add_subcommand(name);
    add_common(sub);
    if (std::string(name) == "tomo") {
      sub->add_option("--bootstrap", bootstrap, "multinomial resamples for an SW spread estimate");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : steerlab::kExitInput;
  }

  CLI::App* sub = app.get_subcommands().front();
  cmd.command = sub->get_name();
  if (sub->count("--config")) cmd.config = config;
  if (sub->count("--seed")) cmd.seed = seed;
  if (sub->count("--out")) cmd.out = out;
  if (sub->count("--mode")) cmd.mode = mode;
  if (sub->count("--shots")) cmd.shots = shots;
  if (cmd.command == "tomo" && sub->count("--bootstrap")) cmd.bootstrap = bootstrap;
  for (const auto& p : inputs) cmd.inputs.emplace_back(p);
  return steerlab::run_command(cmd, std::cerr);
}
