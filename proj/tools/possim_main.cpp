// possim: checkpoint-finality attack simulator and economic-security
// calculator. Subcommands: simulate, econ, sweep, replay.
#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "possim/cli.hpp"

namespace {

// Numeric flags an econ subcommand may take; only the ones the user set
// are forwarded, so each subcommand can tell "missing" from "zero".
const std::vector<std::string> kEconFlags = {
    "annual-discount", "block-seconds", "beta",  "alpha",    "p-block",
    "c",               "v-attack",      "n-attack", "price", "p-vol",
    "n-total",         "d",             "v",     "n-liquid"};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"checkpoint-finality attack simulator and economics calculator"};
  app.require_subcommand(1);

  // simulate
  possim::cli::SimulateArgs sim_args;
  std::uint64_t sim_seed = 0;
  auto* simulate = app.add_subcommand("simulate", "run a scenario config");
  simulate->add_option("--config", sim_args.config_path, "scenario config file")
      ->required();
  simulate->add_option("--out", sim_args.out_dir,
                       "output directory (default: $POSSIM_OUT_DIR)");
  auto* seed_opt = simulate->add_option("--seed", sim_seed, "override config seed");

  // econ
  possim::cli::EconArgs econ_args;
  std::map<std::string, double> econ_values;
  std::string econ_csv;
  auto* econ = app.add_subcommand("econ", "closed-form economics calculator");
  econ->add_option("subcommand", econ_args.subcommand,
                   "alpha|safe-value|equilibrium-stake|price|deterrence|"
                   "equilibrium-deposit|velocity")
      ->required();
  std::map<std::string, CLI::Option*> econ_opts;
  for (const std::string& flag : kEconFlags) {
    econ_opts[flag] = econ->add_option("--" + flag, econ_values[flag]);
  }
  auto* econ_csv_opt = econ->add_option("--csv", econ_csv, "also write name,value CSV");

  // sweep
  possim::cli::SweepArgs sweep_args;
  std::string sweep_values;
  auto* sweep = app.add_subcommand("sweep", "grid a config field, emit outcome CSV");
  sweep->add_option("--config", sweep_args.config_path, "base scenario config")
      ->required();
  sweep->add_option("--field", sweep_args.field,
                    "econ_* key or stake:<group> to vary")
      ->required();
  sweep->add_option("--values", sweep_values, "comma-separated grid values");
  sweep->add_option("--from", sweep_args.from, "grid start");
  sweep->add_option("--to", sweep_args.to, "grid end");
  sweep->add_option("--steps", sweep_args.steps, "grid point count");
  sweep->add_option("--out", sweep_args.out_csv, "CSV path (default: stdout)");
  sweep->add_flag("--with-sim", sweep_args.with_sim,
                  "run the full simulation at each grid point");
  sweep->add_option("--jobs", sweep_args.jobs, "parallel workers (default 1)");

  // replay
  possim::cli::ReplayArgs replay_args;
  std::uint64_t replay_seed = 0;
  auto* replay = app.add_subcommand("replay", "verify a recorded event trace");
  replay->add_option("--config", replay_args.config_path, "scenario config file")
      ->required();
  replay->add_option("trace", replay_args.trace_path, "trace.log to verify")
      ->required();
  auto* replay_seed_opt = replay->add_option("--seed", replay_seed, "override config seed");

  CLI11_PARSE(app, argc, argv);

  if (simulate->parsed()) {
    if (seed_opt->count() > 0) sim_args.seed_override = sim_seed;
    if (sim_args.out_dir.empty()) {
      if (const char* env = std::getenv("POSSIM_OUT_DIR")) sim_args.out_dir = env;
    }
    if (sim_args.out_dir.empty()) {
      std::cerr << "simulate needs --out or POSSIM_OUT_DIR\n";
      return possim::cli::kExitConfig;
    }
    return possim::cli::cmd_simulate(sim_args, std::cout, std::cerr);
  }
  if (econ->parsed()) {
    for (const auto& [flag, opt] : econ_opts) {
      if (opt->count() > 0) econ_args.flags[flag] = econ_values[flag];
    }
    if (econ_csv_opt->count() > 0) econ_args.csv_path = econ_csv;
    return possim::cli::cmd_econ(econ_args, std::cout, std::cerr);
  }
  if (sweep->parsed()) {
    if (!sweep_values.empty()) {
      std::size_t pos = 0;
      while (pos < sweep_values.size()) {
        const std::size_t comma = sweep_values.find(',', pos);
        const std::string token = sweep_values.substr(
            pos, comma == std::string::npos ? std::string::npos : comma - pos);
        try {
          sweep_args.values.push_back(std::stod(token));
        } catch (const std::exception&) {
          std::cerr << "cannot parse sweep value '" << token << "'\n";
          return possim::cli::kExitConfig;
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
    }
    return possim::cli::cmd_sweep(sweep_args, std::cout, std::cerr);
  }
  if (replay->parsed()) {
    if (replay_seed_opt->count() > 0) replay_args.seed_override = replay_seed;
    return possim::cli::cmd_replay(replay_args, std::cout, std::cerr);
  }
  return possim::cli::kExitError;
}
