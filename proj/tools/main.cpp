#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"kz: relaxed block Kaczmarz experiments"};
  app.require_subcommand(1);

  std::string config_path;
  kz::cli::Overrides overrides;
  std::string output_dir;
  std::uint64_t seed = 0;

  CLI::App* run = app.add_subcommand("run", "run the experiment described by a JSON config");
  run->add_option("config", config_path, "path to the config file")->required();
  CLI::Option* out_opt =
      run->add_option("--output-dir", output_dir, "directory for artifacts (overrides the config)");
  CLI::Option* seed_opt =
      run->add_option("--seed", seed, "root seed (overrides the config)");

  bool as_json = false;
  CLI::App* list = app.add_subcommand("list", "list the available experiment kinds");
  list->add_flag("--json", as_json, "machine-readable output");

  CLI11_PARSE(app, argc, argv);

  if (list->parsed()) {
    kz::cli::list_experiments(std::cout, as_json);
    return 0;
  }
  if (*out_opt) overrides.output_dir = output_dir;
  if (*seed_opt) overrides.seed = seed;
  return kz::cli::run_config(config_path, overrides, std::cerr);
}
