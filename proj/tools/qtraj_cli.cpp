// qtraj: run trajectory experiments from a JSON configuration.
//
//   qtraj run <config>        run the configured experiment
//   qtraj validate <config>   parse, resolve defaults and print the canonical config
//   qtraj list-experiments
//
// Exit status: 0 success, 2 configuration error, 3 numerical abort, 1 anything else.

#include "qtraj/config.hpp"
#include "qtraj/errors.hpp"
#include "qtraj/experiments.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

constexpr int kConfigError = 2;
constexpr int kNumericalAbort = 3;

int run(const std::string &path) {
  const qtraj::RunConfig config = qtraj::load_config(path);
  const qtraj::RunOutput out = qtraj::run_experiment(config);
  std::cout << "output: " << out.directory.string() << "\n";
  for (const auto &f : out.files)
    std::cout << "  " << f << "\n";
  if (out.aborted) {
    std::cerr << "numerical abort: " << out.abort_reason << "\n";
    return kNumericalAbort;
  }
  return 0;
}

int validate(const std::string &path) {
  std::cout << qtraj::serialize(qtraj::load_config(path));
  return 0;
}

int list_experiments() {
  for (qtraj::Experiment e : qtraj::all_experiments())
    std::cout << qtraj::to_string(e) << "\t" << qtraj::describe(e) << "\n";
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Quantum trajectory experiments"};
  app.set_version_flag("--version", qtraj::library_version());
  app.require_subcommand(1);

  std::string config_path;
  auto *run_cmd = app.add_subcommand("run", "Run the experiment described by a config file");
  run_cmd->add_option("config", config_path, "Path to the JSON config")->required();
  auto *validate_cmd = app.add_subcommand("validate", "Check a config and print it resolved");
  validate_cmd->add_option("config", config_path, "Path to the JSON config")->required();
  auto *list_cmd = app.add_subcommand("list-experiments", "List available experiments");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e);
  }

  try {
    if (*run_cmd)
      return run(config_path);
    if (*validate_cmd)
      return validate(config_path);
    if (*list_cmd)
      return list_experiments();
  } catch (const qtraj::ConfigError &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const qtraj::NumericalAbort &e) {
    std::cerr << "numerical abort: " << e.what() << "\n";
    return kNumericalAbort;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
