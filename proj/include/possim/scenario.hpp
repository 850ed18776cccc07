// Scripted attack scenarios over the network simulation: double-spend
// equivocation across a partition, vote-withholding sabotage, merchant
// observers, and the offline-coordination resolution policies
// (soft-fork censoring, inactivity leak).
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "possim/core.hpp"
#include "possim/economics.hpp"
#include "possim/finality.hpp"
#include "possim/netsim.hpp"

namespace possim {

class scenario_infeasible : public config_error {
 public:
  using config_error::config_error;
};

struct ValidatorGroup {
  std::string name;
  RegionId region;
  Stake stake = 0;
  bool honest = true;
  int count = 1;  // split the stake over this many equal validators
  std::set<Height> offline_epochs;  // epochs where the group casts no vote
};

enum class AttackKind { none, double_spend, sabotage };

struct AttackPlan {
  AttackKind kind = AttackKind::none;
  // double_spend: the two regions whose merchants receive the conflicting
  // payments; the partition between them makes the equivocation invisible.
  std::pair<RegionId, RegionId> merchant_regions;
  Stake epsilon_units = 1;  // integer realization of the epsilon margin
  Height start_epoch = 1;
};

enum class ResolutionKind { none, soft_fork_censor, inactivity_leak };
enum class BranchPreference { first_finalized, most_burned };

struct ResolutionPolicy {
  ResolutionKind kind = ResolutionKind::none;
  Fraction leak_rate{0, 1};        // per-epoch deposit fraction for non-voters
  Height t_offline_epochs = 3;     // consecutive silent epochs before censoring
  BranchPreference preference = BranchPreference::first_finalized;
};

// Economic inputs used for pricing report quantities and for sweeps. The
// consensus path never reads these.
struct EconomicInputs {
  double p_block = 0;
  double c = 0;
  double beta = 0;
  double v_attack = 0;
  double d_volume = 0;
  double velocity = 0;
  double p_volatility = 0;
  double n_total = 0;    // fixed supply for the deposit/liquid split
  double n_deposit = 0;  // sweep-only: point on the deposit/liquid split

  bool has_price() const { return c > 0 && beta >= 0 && beta < 1; }
  bool has_velocity() const { return d_volume > 0 && velocity > 0; }
};

struct ScenarioConfig {
  static constexpr const char* kSchemaId = "possim-scenario-v1";

  Stake total_supply = 0;
  std::vector<ValidatorGroup> groups;
  AttackPlan attack;
  LatencyModel latency;
  ResolutionPolicy resolution;
  Height duration_epochs = 1;
  std::uint64_t seed = 0;
  Tick block_interval = kDefaultBlockIntervalSeconds;
  Tick withdrawal_delay = kDefaultWithdrawalDelaySeconds;
  // Honest validators vote this long after a height opens; by then the
  // gossip of every reachable checkpoint has settled. Default: half the
  // checkpoint interval.
  std::optional<Tick> vote_offset;
  Tick max_jitter = 0;
  // Hard scarce-stake check: refuse scenarios where the liquid supply
  // cannot cover half of the pre-attack stakes.
  bool enforce_liquidity_cap = false;
  EconomicInputs econ;
  double merchant_value = 0;  // value of each double-spent payment

  Tick epoch_length() const { return block_interval * kBlocksPerCheckpoint; }
  Tick effective_vote_offset() const {
    return vote_offset.value_or(epoch_length() / 2);
  }

  // Structural validation; throws config_error / scenario_infeasible.
  void validate() const;
};

struct MerchantOutcome {
  std::string name;
  RegionId region;
  CheckpointId payment;
  double value = 0;
  std::optional<Tick> accepted_at;
  bool reverted = false;  // acceptance undone by resolution
};

struct EpochRow {
  Height epoch = 0;
  Tick open_tick = 0;
  std::uint64_t finalized_new = 0;
  std::uint64_t finalized_total = 0;
  bool halted = false;
  Stake attacker_stake = 0;
  Stake honest_stake = 0;
  Stake liquid = 0;
  Stake burned = 0;
  std::uint64_t evidence_count = 0;
  std::uint64_t merchants_accepted = 0;
  Stake leaked_this_epoch = 0;
};

struct ResolutionOutcome {
  std::string description = "none";
  std::optional<CheckpointId> surviving_branch;
  std::vector<ValidatorId> censored;
  // Censored validators that were scenario-honest: the detection rule's
  // false positives.
  std::vector<ValidatorId> false_positive_censored;
  std::optional<double> pre_price;
  std::optional<double> post_fork_price;
};

struct ScenarioReport {
  std::string scenario_kind;
  Height duration_epochs = 0;
  std::uint64_t seed = 0;

  std::vector<std::pair<CheckpointId, CheckpointId>> conflicting_finalizations;
  std::vector<MerchantOutcome> merchants;
  std::uint64_t merchants_accepted = 0;
  std::uint64_t merchants_defrauded = 0;
  double defrauded_value = 0;

  Stake attacker_stake_burned = 0;
  double attacker_realized_value = 0;
  double stake_price = 0;  // from the economics module, never ad hoc
  double attacker_net = 0;  // realized value minus burned stake at stake_price

  Height finalization_halt_epochs = 0;
  std::optional<Height> resume_epoch;
  std::uint64_t finalized_total = 0;

  ResolutionOutcome resolution;
  Stake honest_leaked = 0;

  std::vector<EpochRow> series;
  std::vector<std::string> trace;
  std::uint64_t events_processed = 0;
  FinalityWarnings warnings;
  std::string final_snapshot;  // audit replica, canonical text
};

// Runs the configured scenario to quiescence and applies the resolution
// policy. Deterministic: identical (config, seed) gives identical reports.
ScenarioReport run_scenario(const ScenarioConfig& config);

// Kind-checked entry points.
ScenarioReport run_double_spend(const ScenarioConfig& config);
ScenarioReport run_sabotage(const ScenarioConfig& config);

// Burns floor(deposit * rate) from every slashable validator that cast no
// vote in `epoch` as seen by this replica. Returns per-validator burns.
std::map<ValidatorId, Stake> apply_inactivity_leak(FinalityState& state,
                                                   Round epoch, Fraction rate);

}  // namespace possim
