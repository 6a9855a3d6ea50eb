#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hexdg/drivers.hpp"

using namespace hexdg;

int main(int argc, char** argv) {
  CLI::App app{"hexdg: DGSEM solver for the compressible Navier-Stokes equations"};
  app.require_subcommand(0, 1);
  std::string config_path;
  int ranks = 0;
  std::string output;
  bool print_defaults = false;
  app.add_option("--config", config_path, "parameter file (key = value)");
  app.add_option("--ranks", ranks, "number of rank workers (overrides the config)")->check(CLI::PositiveNumber);
  app.add_option("--output", output, "output directory (overrides the config)");
  app.add_flag("--print-defaults", print_defaults, "print every configuration key with its default");
  auto* run = app.add_subcommand("run", "time-accurate simulation");
  auto* conv = app.add_subcommand("convergence", "manufactured-solution convergence study");
  auto* scaling = app.add_subcommand("scaling", "strong and weak scaling sweep over worker counts");
  auto* perf = app.add_subcommand("perf-report", "per-kernel breakdown of a run's timers.csv");
  for (auto* sub : {run, conv, scaling, perf}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (print_defaults) {
    std::cout << defaults_text();
    return kExitOk;
  }
  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return kExitConfig;
  }

  RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = parse_config(config_path);
    if (ranks > 0) cfg.n_ranks = ranks;
    if (!output.empty()) cfg.output = output;
    cfg.validate();
  } catch (...) {
    return report_failure(std::cerr);
  }

  if (run->parsed()) return cmd_run(cfg, std::cout);
  if (conv->parsed()) return cmd_convergence(cfg, std::cout);
  if (scaling->parsed()) return cmd_scaling(cfg, std::cout);
  return cmd_perf_report(cfg, std::cout);
}
