#include <CLI11.hpp>
#include <iostream>

#include "pdmp/cli.hpp"

int main(int argc, char** argv) {
  namespace cli = pdmp::cli;
  CLI::App app{"Piecewise deterministic Markov process samplers with grid thinning envelopes"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> run_out;
  auto* run = app.add_subcommand("run", "Run one sampler from a config file");
  run->add_option("config", config_path, "INI config file")->required();
  run->add_option("--out", run_out, "Output directory (overrides [output] dir)");

  cli::ExperimentOptions exp;
  auto* experiment = app.add_subcommand("experiment", "Run a benchmark sweep");
  experiment->add_option("name", exp.name, "fig1 | fig2 | fig4 | time_fig5 | fig5 | fig6 | table1")->required();
  experiment->add_flag("--paper-scale", exp.paper_scale, "1e6 events and the published replicate counts");
  experiment->add_option("--seed", exp.seed, "Root seed");
  experiment->add_option("--out", exp.out_dir, "Output directory");
  experiment->add_option("--events", exp.events, "Events per chain");
  experiment->add_option("--replicates", exp.replicates, "Chains per cell");
  experiment->add_option("--dim", exp.dim, "Target dimension (fig1, fig2, table1)");
  experiment->add_option("--strategy", exp.strategy, "Restrict grid cells to one bounding strategy");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitInvalid;
  }

  if (*run) return cli::cmd_run(config_path, run_out, std::cerr);
  exp.threads = cli::default_threads();
  return cli::cmd_experiment(exp, std::cerr);
}
