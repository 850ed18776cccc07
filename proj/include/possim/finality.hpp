// Checkpoint-finality state machine: vote tallying, 2/3 finalization with
// ancestor closure, double-vote evidence, deposit lifecycle, and
// conflicting-finalization detection.
//
// One FinalityState is one replica's view of the protocol. Replicas are
// independent; the network layer decides which messages each one sees and
// in what order.
#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "possim/core.hpp"

namespace possim {

struct SlashingEvidence {
  ValidatorId offender;
  Vote vote_a;  // the earlier vote in this replica's processing order
  Vote vote_b;  // the conflicting vote that triggered detection
  Tick detected_at = 0;

  friend bool operator==(const SlashingEvidence&, const SlashingEvidence&) = default;
};

enum class VoteOutcome {
  counted,           // weight added to the tally
  duplicate,         // same (voter, target, round) seen before; no-op
  ignored_slashed,   // voter already slashed; logged, not an error
  ignored_withdrawn, // voter fully withdrawn; logged, not an error
  ignored_unknown,   // voter never deposited; logged, not an error
  buffered,          // target checkpoint not yet known; held for replay
  rejected_overflow, // reorder buffer full; dropped with a warning
};

struct VoteResult {
  VoteOutcome outcome = VoteOutcome::counted;
  // Present when this vote conflicts with an earlier vote by the same
  // voter at the same height. The vote still counts toward its tally;
  // burning the deposit is a separate, explicit step.
  std::optional<SlashingEvidence> evidence;
  // Checkpoints finalized by this vote, ancestors first.
  std::vector<CheckpointId> newly_finalized;
};

struct CheckpointInsertResult {
  bool inserted = false;
  // Results of buffered votes replayed once the checkpoint arrived.
  std::vector<VoteResult> replayed;
};

// Counters for soft failures. These never halt processing.
struct FinalityWarnings {
  std::uint64_t ignored_votes = 0;
  std::uint64_t duplicate_slashes = 0;
  std::uint64_t buffer_rejects = 0;
};

class FinalityState {
 public:
  // All supply starts liquid; validators enter via deposit().
  explicit FinalityState(Stake total_supply,
                         Tick withdrawal_delay = kDefaultWithdrawalDelaySeconds);

  // --- deposit lifecycle -------------------------------------------------

  // pre: amount > 0 and amount <= liquid supply (scarce-stake constraint:
  //      an attacker cannot deposit coins that do not exist).
  // post: validator active with the given deposit; liquid reduced.
  void deposit(const ValidatorId& id, const RegionId& region, Stake amount,
               Tick at, bool honest = true);

  // pre: validator active.
  // post: status exiting; deposit stays slashable until at + delay.
  void request_exit(const ValidatorId& id, Tick at);

  // pre: validator exiting and at >= withdrawable_at (else not_yet_withdrawable).
  // post: deposit returned to liquid; validator withdrawn and out of the
  //       slashable denominator.
  void withdraw(const ValidatorId& id, Tick at);

  // --- checkpoint tree ---------------------------------------------------

  // Genesis (height 0, no parent) is finalized on insertion; every other
  // checkpoint must extend an existing parent with height parent+1.
  CheckpointInsertResult add_checkpoint(const Checkpoint& cp, Tick at);
  bool has_checkpoint(const CheckpointId& id) const;
  const Checkpoint& checkpoint(const CheckpointId& id) const;

  bool is_ancestor(const CheckpointId& ancestor, const CheckpointId& descendant) const;
  // Neither is an ancestor of the other.
  bool conflicts(const CheckpointId& a, const CheckpointId& b) const;

  // --- votes and finalization ---------------------------------------------

  // Tallies the vote (deduplicated per voter/target/round), detects
  // double votes at the same height, and finalizes the target plus its
  // unfinalized ancestors when the tally reaches 2/3 of the slashable
  // deposit at processing time. Votes for unknown checkpoints are held in
  // a bounded reorder buffer and replayed on checkpoint arrival.
  VoteResult process_vote(const Vote& vote, Tick at);

  // Burns the offender's whole deposit and removes it from the slashable
  // denominator. Weight already tallied is not retroactively removed;
  // only this replica's future votes from the offender are ignored.
  // Returns false (and counts a warning) when already applied.
  bool apply_slash(const SlashingEvidence& evidence);

  // Same burn-everything primitive without evidence; offline-coordination
  // policies (soft-fork censoring) use it.
  bool slash_validator(const ValidatorId& id);

  // Burns `amount` (capped at the current deposit) from a validator that
  // failed to vote; the inactivity-leak policy drives this.
  Stake reduce_deposit(const ValidatorId& id, Stake amount);

  // All unordered pairs of finalized checkpoints where neither is an
  // ancestor of the other. Empty under honest-majority operation.
  std::vector<std::pair<CheckpointId, CheckpointId>> conflicting_finalizations() const;

  // --- queries -------------------------------------------------------------

  bool is_finalized(const CheckpointId& id) const { return finalized_.count(id) > 0; }
  const std::set<CheckpointId>& finalized() const { return finalized_; }
  // Highest finalized checkpoint; ties broken by smallest id.
  CheckpointId preferred_finalized_tip() const;
  std::vector<CheckpointId> checkpoints_at_height(Height h) const;

  bool has_validator(const ValidatorId& id) const { return validators_.count(id) > 0; }
  const ValidatorState& validator(const ValidatorId& id) const;
  const std::map<ValidatorId, ValidatorState>& validators() const { return validators_; }

  Stake slashable_total() const;  // active + exiting deposits
  Stake active_total() const;
  Stake liquid() const { return liquid_; }
  Stake burned() const { return burned_; }
  Stake total_supply() const { return total_supply_; }
  Tick withdrawal_delay() const { return withdrawal_delay_; }

  bool has_voted(const ValidatorId& id, Round round) const;
  const std::vector<Vote>& vote_log() const { return vote_log_; }
  const FinalityWarnings& warnings() const { return warnings_; }

  // active + exiting + liquid + burned == total supply, exactly.
  bool conservation_holds() const;

  // Canonically ordered text serialization of validators, tallies, the
  // finalized set, and the burned total. Stable across runs; used by
  // golden-file tests and report digests.
  std::string snapshot() const;

  static constexpr std::size_t kVoteBufferCapacity = 10'000;

 private:
  struct Tally {
    Stake weight = 0;
    std::set<ValidatorId> voters;
  };

  VoteResult process_known_target(const Vote& vote, Tick at);
  void finalize_with_ancestors(const CheckpointId& id, std::vector<CheckpointId>& out);

  Stake total_supply_;
  Tick withdrawal_delay_;
  Stake liquid_;
  Stake burned_ = 0;

  std::map<ValidatorId, ValidatorState> validators_;
  std::map<CheckpointId, Checkpoint> checkpoints_;
  std::optional<CheckpointId> genesis_id_;
  std::map<std::pair<CheckpointId, Round>, Tally> tallies_;
  std::set<CheckpointId> finalized_;
  // (voter, height) -> distinct targets voted at that height. Confines
  // double-vote detection to conflicting same-height targets.
  std::map<std::pair<ValidatorId, Height>, std::vector<Vote>> votes_by_height_;
  std::vector<Vote> vote_log_;
  std::deque<Vote> pending_votes_;  // targets not yet known, FIFO
  FinalityWarnings warnings_;
};

}  // namespace possim
