// Command implementations behind the possim binary. They live in the
// library so tests can drive them in-process; the binary only parses
// arguments and forwards here.
#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "possim/report_io.hpp"
#include "possim/scenario.hpp"

namespace possim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitConfig = 2;    // malformed or infeasible config
inline constexpr int kExitLivelock = 3;  // event-count safety cap tripped

struct SimulateArgs {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed_override;
};

// Runs the scenario and writes report.json / series.csv / trace.log.
int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err);

struct EconArgs {
  std::string subcommand;  // alpha|safe-value|equilibrium-stake|price|
                           // deterrence|equilibrium-deposit|velocity
  std::map<std::string, double> flags;
  std::optional<std::string> csv_path;
};

int cmd_econ(const EconArgs& args, std::ostream& out, std::ostream& err);

struct SweepArgs {
  std::string config_path;
  std::string field;  // econ_* key or stake:<group-name>
  std::vector<double> values;  // explicit grid; else from/to/steps
  double from = 0;
  double to = 0;
  int steps = 0;
  std::string out_csv;  // empty: write grid to stdout
  bool with_sim = false;
  int jobs = 1;
};

int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err);

struct ReplayArgs {
  std::string config_path;
  std::string trace_path;
  std::optional<std::uint64_t> seed_override;
};

// Re-runs the scenario and checks the recorded trace line by line.
int cmd_replay(const ReplayArgs& args, std::ostream& out, std::ostream& err);

// The sweep grid for one field value; exposed for tests.
struct SweepRow {
  int index = 0;
  double value = 0;
  std::optional<double> beta, alpha, n_star, price, n_attack, safe_value;
  std::optional<bool> deterred;
  std::optional<double> n_deposit_star, c_at_deposit, r_liquid_at_liquid;
  std::optional<std::uint64_t> halt_epochs, conflicting_pairs;
  std::optional<Stake> attacker_burned;
};

std::vector<SweepRow> sweep_grid(const ScenarioConfig& base, const SweepArgs& args);
std::string sweep_csv(const std::string& field, const std::vector<SweepRow>& rows);

}  // namespace possim::cli
