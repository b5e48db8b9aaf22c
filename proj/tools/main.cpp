#include "commands.hpp"

#include <CLI11.hpp>

#include <string>

int main(int argc, char** argv) {
  CLI::App app{"ctshift: meta-learning of shared initializations with continual trajectory "
               "shifting"};
  app.require_subcommand(1);

  std::string config_path;
  ctshift::cli::GlobalFlags flags;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "configuration file")->required();
    cmd->add_option_function<std::uint64_t>(
        "--seed", [&](std::uint64_t v) { flags.seed = v; }, "override the config seed");
    cmd->add_option_function<std::string>(
        "--out", [&](const std::string& v) { flags.out = v; }, "override the output directory");
    cmd->add_option_function<int>(
        "--threads", [&](int v) { flags.threads = v; }, "worker threads");
  };

  CLI::App* train = app.add_subcommand("train", "run one meta-training experiment");
  add_common(train);
  CLI::App* qmap = app.add_subcommand("quality-map", "grid of task-average post-adaptation loss");
  add_common(qmap);
  CLI::App* esweep = app.add_subcommand("error-sweep", "approximation-error measurements");
  add_common(esweep);
  CLI::App* landscape = app.add_subcommand("landscape", "meta-trajectories from a start grid");
  add_common(landscape);
  CLI::App* reference = app.add_subcommand("config-reference",
                                           "print the config schema with defaults");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (train->parsed()) return ctshift::cli::cmd_train(config_path, flags);
  if (qmap->parsed()) return ctshift::cli::cmd_quality_map(config_path, flags);
  if (esweep->parsed()) return ctshift::cli::cmd_error_sweep(config_path, flags);
  if (landscape->parsed()) return ctshift::cli::cmd_landscape(config_path, flags);
  if (reference->parsed()) {
    ctshift::cli::print_config_reference();
    return 0;
  }
  return 2;
}
