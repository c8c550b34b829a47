#include "gpe/runner.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv)
{
  CLI::App app{"Controlled Gross-Pitaevskii simulator on the Hermite basis"};
  app.require_subcommand(1);

  gpe::RunOptions options;
  std::uint64_t seed = 0;
  std::string output;
  CLI::App* run = app.add_subcommand("run", "Run one experiment described by a JSON config");
  run->add_option("--config", options.config, "experiment config (JSON)")->required();
  auto* seed_opt = run->add_option("--seed-override", seed, "replace the config seed");
  auto* out_opt = run->add_option("--output-override", output, "replace the output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : gpe::exit_validation;
  }
  if (*seed_opt) options.seed_override = seed;
  if (*out_opt) options.output_override = output;
  return gpe::run_from_options(options, std::cout, std::cerr);
}
