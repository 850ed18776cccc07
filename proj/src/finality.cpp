#include "possim/finality.hpp"

#include <algorithm>
#include <sstream>

namespace possim {

FinalityState::FinalityState(Stake total_supply, Tick withdrawal_delay)
    : total_supply_(total_supply),
      withdrawal_delay_(withdrawal_delay),
      liquid_(total_supply) {}

void FinalityState::deposit(const ValidatorId& id, const RegionId& region,
                            Stake amount, Tick /*at*/, bool honest) {
  if (amount == 0) throw state_error("deposit: amount must be positive");
  if (validators_.count(id) > 0) throw state_error("deposit: validator exists: " + id);
  if (amount > liquid_) {
    throw insufficient_liquid_supply("deposit: " + id + " wants " +
                                     std::to_string(amount) + " units, liquid " +
                                     std::to_string(liquid_));
  }
  liquid_ -= amount;
  validators_[id] = ValidatorState{id, region, amount, ValidatorStatus::active,
                                   std::nullopt, honest};
}

void FinalityState::request_exit(const ValidatorId& id, Tick at) {
  auto it = validators_.find(id);
  if (it == validators_.end()) throw state_error("exit: unknown validator: " + id);
  if (it->second.status != ValidatorStatus::active) {
    throw state_error("exit: validator not active: " + id);
  }
  it->second.status = ValidatorStatus::exiting;
  it->second.withdrawable_at = at + withdrawal_delay_;
}

void FinalityState::withdraw(const ValidatorId& id, Tick at) {
  auto it = validators_.find(id);
  if (it == validators_.end()) throw state_error("withdraw: unknown validator: " + id);
  ValidatorState& v = it->second;
  if (v.status != ValidatorStatus::exiting) {
    throw state_error("withdraw: validator not exiting: " + id);
  }
  if (at < *v.withdrawable_at) {
    throw not_yet_withdrawable("withdraw: " + id + " locked until tick " +
                               std::to_string(*v.withdrawable_at));
  }
  liquid_ += v.deposit;
  v.deposit = 0;
  v.status = ValidatorStatus::withdrawn;
}

CheckpointInsertResult FinalityState::add_checkpoint(const Checkpoint& cp, Tick at) {
  CheckpointInsertResult result;
  if (checkpoints_.count(cp.id) > 0) return result;  // duplicate delivery

  if (cp.parent.has_value()) {
    auto pit = checkpoints_.find(*cp.parent);
    if (pit == checkpoints_.end()) {
      throw state_error("checkpoint " + cp.id + ": unknown parent " + *cp.parent);
    }
    if (cp.height != pit->second.height + 1) {
      throw state_error("checkpoint " + cp.id + ": height must be parent+1");
    }
  } else {
    if (cp.height != 0) {
      throw state_error("checkpoint " + cp.id + ": only genesis may lack a parent");
    }
    if (genesis_id_.has_value()) {
      throw state_error("checkpoint " + cp.id + ": a genesis root already exists");
    }
    genesis_id_ = cp.id;
  }

  checkpoints_[cp.id] = cp;
  result.inserted = true;
  if (!cp.parent.has_value()) finalized_.insert(cp.id);  // agreed root

  // Replay buffered votes now targetable. FIFO order preserves the
  // network arrival order of the buffered votes.
  std::deque<Vote> keep;
  for (Vote& v : pending_votes_) {
    if (v.target == cp.id) {
      result.replayed.push_back(process_known_target(v, at));
    } else {
      keep.push_back(std::move(v));
    }
  }
  pending_votes_ = std::move(keep);
  return result;
}

bool FinalityState::has_checkpoint(const CheckpointId& id) const {
  return checkpoints_.count(id) > 0;
}

const Checkpoint& FinalityState::checkpoint(const CheckpointId& id) const {
  auto it = checkpoints_.find(id);
  if (it == checkpoints_.end()) throw state_error("unknown checkpoint: " + id);
  return it->second;
}

bool FinalityState::is_ancestor(const CheckpointId& ancestor,
                                const CheckpointId& descendant) const {
  const Checkpoint& anc = checkpoint(ancestor);
  const Checkpoint* cur = &checkpoint(descendant);
  while (cur->height > anc.height && cur->parent.has_value()) {
    cur = &checkpoint(*cur->parent);
  }
  return cur->id == ancestor;
}

bool FinalityState::conflicts(const CheckpointId& a, const CheckpointId& b) const {
  if (a == b) return false;
  return !is_ancestor(a, b) && !is_ancestor(b, a);
}

VoteResult FinalityState::process_vote(const Vote& vote, Tick at) {
  auto vit = validators_.find(vote.voter);
  if (vit == validators_.end()) {
    ++warnings_.ignored_votes;
    return {VoteOutcome::ignored_unknown, std::nullopt, {}};
  }
  switch (vit->second.status) {
    case ValidatorStatus::slashed:
      ++warnings_.ignored_votes;
      return {VoteOutcome::ignored_slashed, std::nullopt, {}};
    case ValidatorStatus::withdrawn:
      ++warnings_.ignored_votes;
      return {VoteOutcome::ignored_withdrawn, std::nullopt, {}};
    default:
      break;
  }

  if (checkpoints_.count(vote.target) == 0) {
    if (pending_votes_.size() >= kVoteBufferCapacity) {
      ++warnings_.buffer_rejects;
      return {VoteOutcome::rejected_overflow, std::nullopt, {}};
    }
    pending_votes_.push_back(vote);
    return {VoteOutcome::buffered, std::nullopt, {}};
  }
  return process_known_target(vote, at);
}

VoteResult FinalityState::process_known_target(const Vote& vote, Tick at) {
  VoteResult result;
  const Checkpoint& target = checkpoints_.at(vote.target);

  Tally& tally = tallies_[{vote.target, vote.round}];
  if (tally.voters.count(vote.voter) > 0) {
    result.outcome = VoteOutcome::duplicate;
    return result;
  }

  // Double-vote check: a conflicting target at the same height, any round.
  auto& prior = votes_by_height_[{vote.voter, target.height}];
  for (const Vote& earlier : prior) {
    if (earlier.target != vote.target && conflicts(earlier.target, vote.target)) {
      result.evidence = SlashingEvidence{vote.voter, earlier, vote, at};
      break;
    }
  }
  prior.push_back(vote);

  tally.voters.insert(vote.voter);
  tally.weight += vote.weight;
  vote_log_.push_back(vote);
  result.outcome = VoteOutcome::counted;

  if (!is_finalized(vote.target) &&
      meets_two_thirds(tally.weight, slashable_total())) {
    finalize_with_ancestors(vote.target, result.newly_finalized);
  }
  return result;
}

void FinalityState::finalize_with_ancestors(const CheckpointId& id,
                                            std::vector<CheckpointId>& out) {
  std::vector<CheckpointId> chain;
  const Checkpoint* cur = &checkpoints_.at(id);
  while (!is_finalized(cur->id)) {
    chain.push_back(cur->id);
    if (!cur->parent.has_value()) break;
    cur = &checkpoints_.at(*cur->parent);
  }
  // Ancestors first, target last.
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    finalized_.insert(*it);
    out.push_back(*it);
  }
}

bool FinalityState::apply_slash(const SlashingEvidence& evidence) {
  return slash_validator(evidence.offender);
}

bool FinalityState::slash_validator(const ValidatorId& id) {
  auto it = validators_.find(id);
  if (it == validators_.end()) throw state_error("slash: unknown validator: " + id);
  ValidatorState& v = it->second;
  if (v.status == ValidatorStatus::slashed) {
    ++warnings_.duplicate_slashes;
    return false;
  }
  burned_ += v.deposit;
  v.deposit = 0;
  v.status = ValidatorStatus::slashed;
  v.withdrawable_at.reset();
  return true;
}

Stake FinalityState::reduce_deposit(const ValidatorId& id, Stake amount) {
  auto it = validators_.find(id);
  if (it == validators_.end()) throw state_error("reduce: unknown validator: " + id);
  ValidatorState& v = it->second;
  if (!v.slashable()) return 0;
  const Stake cut = std::min(amount, v.deposit);
  v.deposit -= cut;
  burned_ += cut;
  return cut;
}

std::vector<std::pair<CheckpointId, CheckpointId>>
FinalityState::conflicting_finalizations() const {
  std::vector<std::pair<CheckpointId, CheckpointId>> pairs;
  for (auto a = finalized_.begin(); a != finalized_.end(); ++a) {
    for (auto b = std::next(a); b != finalized_.end(); ++b) {
      if (conflicts(*a, *b)) pairs.emplace_back(*a, *b);
    }
  }
  return pairs;
}

CheckpointId FinalityState::preferred_finalized_tip() const {
  CheckpointId best;
  Height best_height = 0;
  bool have = false;
  for (const CheckpointId& id : finalized_) {
    const Height h = checkpoints_.at(id).height;
    if (!have || h > best_height || (h == best_height && id < best)) {
      best = id;
      best_height = h;
      have = true;
    }
  }
  if (!have) throw state_error("no finalized checkpoint");
  return best;
}

std::vector<CheckpointId> FinalityState::checkpoints_at_height(Height h) const {
  std::vector<CheckpointId> out;
  for (const auto& [id, cp] : checkpoints_) {
    if (cp.height == h) out.push_back(id);
  }
  return out;  // std::map keeps this sorted by id
}

const ValidatorState& FinalityState::validator(const ValidatorId& id) const {
  auto it = validators_.find(id);
  if (it == validators_.end()) throw state_error("unknown validator: " + id);
  return it->second;
}

Stake FinalityState::slashable_total() const {
  Stake sum = 0;
  for (const auto& [id, v] : validators_) {
    if (v.slashable()) sum += v.deposit;
  }
  return sum;
}

Stake FinalityState::active_total() const {
  Stake sum = 0;
  for (const auto& [id, v] : validators_) {
    if (v.status == ValidatorStatus::active) sum += v.deposit;
  }
  return sum;
}

bool FinalityState::has_voted(const ValidatorId& id, Round round) const {
  for (const auto& [key, tally] : tallies_) {
    if (key.second == round && tally.voters.count(id) > 0) return true;
  }
  return false;
}

bool FinalityState::conservation_holds() const {
  Stake deposits = 0;
  for (const auto& [id, v] : validators_) deposits += v.deposit;
  return deposits + liquid_ + burned_ == total_supply_;
}

std::string FinalityState::snapshot() const {
  std::ostringstream out;
  out << "supply " << total_supply_ << " liquid " << liquid_ << " burned "
      << burned_ << "\n";
  for (const auto& [id, v] : validators_) {
    out << "validator " << id << " region=" << v.region << " deposit=" << v.deposit
        << " status=" << to_string(v.status);
    if (v.withdrawable_at) out << " withdrawable_at=" << *v.withdrawable_at;
    out << "\n";
  }
  for (const auto& [key, tally] : tallies_) {
    out << "tally " << key.first << " round=" << key.second
        << " weight=" << tally.weight << " voters=";
    bool first = true;
    for (const ValidatorId& voter : tally.voters) {
      if (!first) out << ",";
      out << voter;
      first = false;
    }
    out << "\n";
  }
  for (const CheckpointId& id : finalized_) out << "finalized " << id << "\n";
  return out.str();
}

}  // namespace possim
