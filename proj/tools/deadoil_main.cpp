// Command line front end: deadoil <solve|optimize|verify> --config PATH
// [--output DIR] [--seed N]. Exit codes: 0 success, 2 nonconvergence,
// 3 config error, 4 verification failure.

#include "deadoil/run.hpp"
#include "deadoil/verify.hpp"

#include <cstdint>
#include <iostream>

#include <CLI11.hpp>

int main(int argc, char** argv) {
  CLI::App app{"Finite difference solver and source control for the coupled "
               "saturation-pressure system"};
  app.require_subcommand(1);

  struct Args {
    std::string config;
    std::string output;
    std::uint64_t seed = deadoil::kDefaultSeed;
  };
  Args args;

  for (const auto& name : {"solve", "optimize", "verify"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", args.config, "Path to a config file")
        ->required();
    sub->add_option("--output", args.output,
                    "Output directory (overrides [output] directory)");
    sub->add_option("--seed", args.seed,
                    "Seed for randomized verification cases");
  }
  app.get_subcommand("solve")->description(
      "Solve the coupled state system for the configured source");
  app.get_subcommand("optimize")->description(
      "Minimize the tracking objective over the injection source");
  app.get_subcommand("verify")->description(
      "Run the configured verification cases and write reports");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : deadoil::kExitConfigError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const deadoil::RunConfig cfg = deadoil::parse_config(args.config);
    return deadoil::run_subcommand(command, cfg, args.output, args.seed);
  } catch (const deadoil::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return deadoil::kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return deadoil::kExitNonconvergence;
  }
}
