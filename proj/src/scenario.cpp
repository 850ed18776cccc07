#include "possim/scenario.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace possim {

namespace {

std::string canonical_checkpoint_id(Height h) { return "h" + std::to_string(h); }

struct ExpandedValidator {
  ValidatorId id;
  RegionId region;
  Stake stake = 0;
  bool honest = true;
  const ValidatorGroup* group = nullptr;
};

std::vector<ExpandedValidator> expand_groups(const ScenarioConfig& config) {
  std::vector<ExpandedValidator> out;
  for (const ValidatorGroup& g : config.groups) {
    const Stake share = g.stake / static_cast<Stake>(g.count);
    for (int i = 0; i < g.count; ++i) {
      ExpandedValidator v;
      v.id = g.count == 1 ? g.name : g.name + "_" + std::to_string(i);
      v.region = g.region;
      v.stake = share;
      v.honest = g.honest;
      v.group = &g;
      out.push_back(std::move(v));
    }
  }
  return out;
}

std::string vote_key(const Vote& v) {
  return v.voter + "|" + v.target + "|" + std::to_string(v.round);
}

std::string evidence_key(const SlashingEvidence& ev) {
  return ev.offender + "|" + vote_key(ev.vote_a) + "|" + vote_key(ev.vote_b);
}

}  // namespace

void ScenarioConfig::validate() const {
  if (total_supply == 0) throw config_error("total_supply must be positive");
  if (duration_epochs == 0) throw config_error("duration_epochs must be at least 1");
  if (block_interval == 0) throw config_error("block_interval must be positive");
  if (latency.regions.empty()) throw config_error("at least one region required");
  {
    std::set<RegionId> seen;
    for (const RegionId& r : latency.regions) {
      if (!seen.insert(r).second) throw config_error("duplicate region: " + r);
    }
  }
  if (groups.empty()) throw config_error("at least one validator group required");

  Stake stake_sum = 0;
  std::set<std::string> names;
  bool any_attacker = false;
  for (const ValidatorGroup& g : groups) {
    if (!names.insert(g.name).second) throw config_error("duplicate group: " + g.name);
    if (g.count < 1) throw config_error("group " + g.name + ": count must be >= 1");
    if (g.stake == 0) throw config_error("group " + g.name + ": stake must be positive");
    if (g.stake % static_cast<Stake>(g.count) != 0) {
      throw config_error("group " + g.name + ": stake must divide evenly over count");
    }
    if (!latency.has_region(g.region)) {
      throw config_error("group " + g.name + ": unknown region " + g.region);
    }
    for (Height e : g.offline_epochs) {
      if (e == 0 || e > duration_epochs) {
        throw config_error("group " + g.name + ": offline epoch out of range");
      }
    }
    stake_sum += g.stake;
    any_attacker = any_attacker || !g.honest;
  }
  if (stake_sum > total_supply) {
    throw scenario_infeasible("group stakes (" + std::to_string(stake_sum) +
                              ") exceed total supply (" + std::to_string(total_supply) +
                              "): not enough coins exist to buy the attack stake");
  }
  if (effective_vote_offset() >= epoch_length()) {
    throw config_error("vote offset must fall inside the checkpoint interval");
  }

  if (attack.kind != AttackKind::none) {
    if (!any_attacker) throw config_error("attack configured but no attacker group");
    if (attack.start_epoch == 0 || attack.start_epoch > duration_epochs) {
      throw config_error("attack start_epoch out of range");
    }
  }
  if (attack.kind == AttackKind::double_spend) {
    if (attack.epsilon_units == 0) throw config_error("epsilon_units must be >= 1");
    const auto& [m0, m1] = attack.merchant_regions;
    if (m0 == m1) throw config_error("merchant regions must differ");
    if (!latency.has_region(m0) || !latency.has_region(m1)) {
      throw config_error("merchant region not in latency model");
    }
    Stake honest_total = 0;
    for (const ValidatorGroup& g : groups) {
      if (!g.honest) continue;
      honest_total += g.stake;
      if (g.region != m0 && g.region != m1) {
        throw scenario_infeasible("double spend needs all honest stake inside the "
                                  "partitioned pair; group " + g.name +
                                  " sits in " + g.region);
      }
    }
    if (enforce_liquidity_cap) {
      const Stake liquid_after_honest = total_supply - honest_total;
      // An outside attacker needs half of the existing stakes; with the
      // scarce-stake cap engaged, too little liquid supply kills the plan.
      if (2 * liquid_after_honest < honest_total) {
        throw scenario_infeasible("liquid supply (" + std::to_string(liquid_after_honest) +
                                  ") is below half of the existing stakes (" +
                                  std::to_string(honest_total) + ")");
      }
    }
  }
  if (resolution.kind == ResolutionKind::inactivity_leak) {
    const Fraction& r = resolution.leak_rate;
    if (r.num == 0 || Fraction{r.num, r.den} >= Fraction{1, 1}) {
      throw config_error("leak rate must lie strictly between 0 and 1");
    }
  }
}

std::map<ValidatorId, Stake> apply_inactivity_leak(FinalityState& state,
                                                   Round epoch, Fraction rate) {
  using u128 = unsigned __int128;
  std::map<ValidatorId, Stake> leaked;
  for (const auto& [id, v] : state.validators()) {
    if (!v.slashable() || v.deposit == 0) continue;
    if (state.has_voted(id, epoch)) continue;
    const Stake cut = static_cast<Stake>(
        static_cast<u128>(v.deposit) * rate.num / rate.den);
    if (cut == 0) continue;
    state.reduce_deposit(id, cut);
    leaked[id] = cut;
  }
  return leaked;
}

namespace {

// One replica per region plus the gossip bookkeeping that keeps flooding
// finite: an object is rebroadcast only on first sight, and only regions
// hosting honest validators relay (an attacker region withholds).
struct RegionNode {
  RegionId region;
  FinalityState view;
  bool hosts_honest = false;
  std::set<std::string> seen_votes;
  std::set<std::string> seen_evidence;

  RegionNode(RegionId r, Stake supply, Tick delay)
      : region(std::move(r)), view(supply, delay) {}
};

struct FinalizationRecord {
  RegionId region;
  CheckpointId checkpoint;
  Tick at;
};

class ScenarioRunner {
 public:
  explicit ScenarioRunner(const ScenarioConfig& config)
      : config_(config), sim_(config.latency, config.seed) {}

  ScenarioReport run();

 private:
  void setup();
  void handle(const SimEvent& event);
  void on_epoch_open(Height h);
  void on_cast_votes(Height h);
  void on_epoch_close(Height h);
  void on_deliver_checkpoint(const DeliverCheckpoint& d);
  void on_deliver_vote(const DeliverVote& d);
  void on_deliver_evidence(const DeliverEvidence& d);

  void note_vote_result(RegionNode& node, const VoteResult& result);
  void note_finalized(RegionNode& node, const std::vector<CheckpointId>& ids);
  void report_evidence(RegionNode& node, const SlashingEvidence& ev);

  RegionNode& node(const RegionId& r) { return nodes_.at(r); }
  RegionNode& audit() { return nodes_.at(audit_region_); }

  void resolve();
  ScenarioReport build_report();
  std::vector<std::pair<CheckpointId, CheckpointId>> collect_conflicts();

  const ScenarioConfig& config_;
  Simulation sim_;
  std::map<RegionId, RegionNode> nodes_;
  std::vector<ExpandedValidator> validators_;
  RegionId audit_region_;
  RegionId attacker_region_;

  CheckpointId canonical_tip_ = "genesis";
  std::vector<FinalizationRecord> finalization_order_;
  std::set<ValidatorId> evidenced_;
  std::vector<MerchantOutcome> merchants_;

  std::map<Height, std::uint64_t> finalized_at_open_;
  std::map<Height, bool> halted_;
  std::vector<EpochRow> series_;
  Stake honest_leaked_ = 0;

  ResolutionOutcome resolution_;
  RegionId resolution_region_;
};

void ScenarioRunner::setup() {
  validators_ = expand_groups(config_);
  audit_region_ = config_.latency.regions.front();
  resolution_region_ = audit_region_;

  for (const RegionId& r : config_.latency.regions) {
    nodes_.emplace(r, RegionNode(r, config_.total_supply, config_.withdrawal_delay));
  }
  for (const ExpandedValidator& v : validators_) {
    if (v.honest) nodes_.at(v.region).hosts_honest = true;
    if (!v.honest && attacker_region_.empty()) attacker_region_ = v.region;
  }

  const Checkpoint genesis{"genesis", 0, std::nullopt};
  for (auto& [r, n] : nodes_) {
    try {
      for (const ExpandedValidator& v : validators_) {
        n.view.deposit(v.id, v.region, v.stake, 0, v.honest);
      }
    } catch (const insufficient_liquid_supply& e) {
      throw scenario_infeasible(e.what());
    }
    n.view.add_checkpoint(genesis, 0);
  }

  const Tick epoch = config_.epoch_length();
  const Tick offset = config_.effective_vote_offset();
  for (Height h = 1; h <= config_.duration_epochs; ++h) {
    sim_.schedule(h * epoch, TimerFire{"epoch_open", h});
    sim_.schedule(h * epoch + offset, TimerFire{"cast_votes", h});
    sim_.schedule((h + 1) * epoch, TimerFire{"epoch_close", h});
  }
  sim_.set_max_jitter(config_.max_jitter);
  sim_.set_handler([this](Simulation&, const SimEvent& ev) { handle(ev); });
}

void ScenarioRunner::handle(const SimEvent& event) {
  if (const auto* t = std::get_if<TimerFire>(&event.payload)) {
    if (t->kind == "epoch_open") on_epoch_open(t->height);
    else if (t->kind == "cast_votes") on_cast_votes(t->height);
    else if (t->kind == "epoch_close") on_epoch_close(t->height);
  } else if (const auto* d = std::get_if<DeliverCheckpoint>(&event.payload)) {
    on_deliver_checkpoint(*d);
  } else if (const auto* d = std::get_if<DeliverVote>(&event.payload)) {
    on_deliver_vote(*d);
  } else if (const auto* d = std::get_if<DeliverEvidence>(&event.payload)) {
    on_deliver_evidence(*d);
  }
  // ScenarioAction has no runner-level behavior.
}

void ScenarioRunner::on_epoch_open(Height h) {
  finalized_at_open_[h] = audit().view.finalized().size();

  const Tick now = sim_.now();
  if (config_.attack.kind == AttackKind::double_spend &&
      h == config_.attack.start_epoch) {
    // The attacker mints two children of the canonical tip and shows each
    // merchant region only its own payment. Honest relays cannot leak the
    // other branch across the partition, and the attacker's region stays
    // silent by design.
    const auto& [m0, m1] = config_.attack.merchant_regions;
    const std::string base = "h" + std::to_string(h);
    const Checkpoint pay_a{base + "_a", h, canonical_tip_};
    const Checkpoint pay_b{base + "_b", h, canonical_tip_};

    sim_.send(attacker_region_, m0, now, DeliverCheckpoint{m0, pay_a});
    sim_.send(attacker_region_, m1, now, DeliverCheckpoint{m1, pay_b});
    sim_.send(attacker_region_, attacker_region_, now,
              DeliverCheckpoint{attacker_region_, pay_a});
    sim_.send(attacker_region_, attacker_region_, now,
              DeliverCheckpoint{attacker_region_, pay_b});

    merchants_.push_back(MerchantOutcome{"merchant_" + m0, m0, pay_a.id,
                                         config_.merchant_value, std::nullopt, false});
    merchants_.push_back(MerchantOutcome{"merchant_" + m1, m1, pay_b.id,
                                         config_.merchant_value, std::nullopt, false});
    canonical_tip_ = pay_a.id;  // later heights extend the first branch
    return;
  }

  const Checkpoint cp{canonical_checkpoint_id(h), h, canonical_tip_};
  canonical_tip_ = cp.id;
  sim_.broadcast(audit_region_, now, [&](const RegionId& to) {
    return EventPayload{DeliverCheckpoint{to, cp}};
  });
}

void ScenarioRunner::on_cast_votes(Height h) {
  const Tick now = sim_.now();
  for (const ExpandedValidator& v : validators_) {
    if (v.group->offline_epochs.count(h) > 0) continue;

    if (!v.honest) {
      if (config_.attack.kind == AttackKind::sabotage &&
          h >= config_.attack.start_epoch) {
        continue;  // withhold the vote
      }
      if (config_.attack.kind == AttackKind::double_spend &&
          h == config_.attack.start_epoch) {
        // Equivocate: one vote per branch, each shown only to the region
        // holding that branch.
        const auto& [m0, m1] = config_.attack.merchant_regions;
        const Stake weight = node(v.region).view.validator(v.id).deposit;
        if (weight == 0) continue;
        const std::string base = "h" + std::to_string(h);
        const Vote va{v.id, base + "_a", h, weight};
        const Vote vb{v.id, base + "_b", h, weight};
        sim_.send(v.region, m0, now, DeliverVote{m0, va});
        sim_.send(v.region, m1, now, DeliverVote{m1, vb});
        continue;
      }
    }

    // Honest rule: vote for the preferred (lowest-id) checkpoint known at
    // this height. Coordination across rounds is abstracted to this one
    // deterministic choice per height.
    const FinalityState& view = node(v.region).view;
    const auto candidates = view.checkpoints_at_height(h);
    if (candidates.empty()) continue;
    const ValidatorState& self = view.validator(v.id);
    if (!self.slashable() || self.deposit == 0) continue;
    const Vote vote{v.id, candidates.front(), h, self.deposit};
    sim_.broadcast(v.region, now, [&](const RegionId& to) {
      return EventPayload{DeliverVote{to, vote}};
    });
  }
}

void ScenarioRunner::on_epoch_close(Height h) {
  RegionNode& a = audit();
  Stake leaked_now = 0;
  if (config_.resolution.kind == ResolutionKind::inactivity_leak) {
    for (auto& [r, n] : nodes_) {
      auto leaks = apply_inactivity_leak(n.view, h, config_.resolution.leak_rate);
      if (r != audit_region_) continue;
      for (const auto& [id, cut] : leaks) {
        leaked_now += cut;
        if (a.view.validator(id).honest) honest_leaked_ += cut;
      }
    }
  }

  const bool halted = a.view.finalized().size() == finalized_at_open_[h];
  halted_[h] = halted;

  EpochRow row;
  row.epoch = h;
  row.open_tick = h * config_.epoch_length();
  row.finalized_total = a.view.finalized().size();
  row.finalized_new = row.finalized_total - finalized_at_open_[h];
  row.halted = halted;
  for (const ExpandedValidator& v : validators_) {
    const Stake d = a.view.validator(v.id).deposit;
    if (v.honest) row.honest_stake += d;
    else row.attacker_stake += d;
  }
  row.liquid = a.view.liquid();
  row.burned = a.view.burned();
  row.evidence_count = a.seen_evidence.size();
  for (const MerchantOutcome& m : merchants_) {
    if (m.accepted_at.has_value()) ++row.merchants_accepted;
  }
  row.leaked_this_epoch = leaked_now;
  series_.push_back(row);
}

void ScenarioRunner::on_deliver_checkpoint(const DeliverCheckpoint& d) {
  RegionNode& n = node(d.to);
  const auto result = n.view.add_checkpoint(d.checkpoint, sim_.now());
  if (!result.inserted) return;
  for (const VoteResult& r : result.replayed) note_vote_result(n, r);
  if (n.hosts_honest) {
    sim_.broadcast(n.region, sim_.now(), [&](const RegionId& to) {
      return EventPayload{DeliverCheckpoint{to, d.checkpoint}};
    });
  }
}

void ScenarioRunner::on_deliver_vote(const DeliverVote& d) {
  RegionNode& n = node(d.to);
  const bool first_seen = n.seen_votes.insert(vote_key(d.vote)).second;
  const VoteResult result = n.view.process_vote(d.vote, sim_.now());
  note_vote_result(n, result);
  if (first_seen && n.hosts_honest) {
    sim_.broadcast(n.region, sim_.now(), [&](const RegionId& to) {
      return EventPayload{DeliverVote{to, d.vote}};
    });
  }
}

void ScenarioRunner::on_deliver_evidence(const DeliverEvidence& d) {
  RegionNode& n = node(d.to);
  if (n.view.validator(d.evidence.offender).status != ValidatorStatus::slashed) {
    n.view.apply_slash(d.evidence);
  }
  evidenced_.insert(d.evidence.offender);
  if (n.seen_evidence.insert(evidence_key(d.evidence)).second && n.hosts_honest) {
    sim_.broadcast(n.region, sim_.now(), [&](const RegionId& to) {
      return EventPayload{DeliverEvidence{to, d.evidence}};
    });
  }
}

void ScenarioRunner::note_vote_result(RegionNode& n, const VoteResult& result) {
  if (result.evidence) report_evidence(n, *result.evidence);
  if (!result.newly_finalized.empty()) note_finalized(n, result.newly_finalized);
}

void ScenarioRunner::report_evidence(RegionNode& n, const SlashingEvidence& ev) {
  evidenced_.insert(ev.offender);
  if (!n.seen_evidence.insert(evidence_key(ev)).second) return;
  if (!n.hosts_honest) return;  // nobody in this region reports it
  sim_.broadcast(n.region, sim_.now(), [&](const RegionId& to) {
    return EventPayload{DeliverEvidence{to, ev}};
  });
}

void ScenarioRunner::note_finalized(RegionNode& n,
                                    const std::vector<CheckpointId>& ids) {
  for (const CheckpointId& id : ids) {
    finalization_order_.push_back({n.region, id, sim_.now()});
    for (MerchantOutcome& m : merchants_) {
      if (m.region == n.region && m.payment == id && !m.accepted_at) {
        m.accepted_at = sim_.now();
      }
    }
  }
}

// Union of every replica's conflict detections, reduced to the minimal
// frontier: once a fork point conflicts, every descendant of one side
// conflicts with the other side too, and listing those adds nothing.
std::vector<std::pair<CheckpointId, CheckpointId>> ScenarioRunner::collect_conflicts() {
  std::set<std::pair<CheckpointId, CheckpointId>> all;
  for (auto& [r, n] : nodes_) {
    for (auto [a, b] : n.view.conflicting_finalizations()) {
      if (b < a) std::swap(a, b);
      all.insert({a, b});
    }
  }
  const FinalityState& view = audit().view;
  const auto anc_eq = [&](const CheckpointId& u, const CheckpointId& x) {
    return u == x || (view.has_checkpoint(u) && view.has_checkpoint(x) &&
                      view.is_ancestor(u, x));
  };
  std::vector<std::pair<CheckpointId, CheckpointId>> frontier;
  for (const auto& p : all) {
    bool redundant = false;
    for (const auto& q : all) {
      if (q == p) continue;
      if ((anc_eq(q.first, p.first) && anc_eq(q.second, p.second)) ||
          (anc_eq(q.first, p.second) && anc_eq(q.second, p.first))) {
        redundant = true;
        break;
      }
    }
    if (!redundant) frontier.push_back(p);
  }
  return frontier;
}

void ScenarioRunner::resolve() {
  const auto frontier = collect_conflicts();
  std::set<std::pair<CheckpointId, CheckpointId>> pairs(frontier.begin(),
                                                        frontier.end());

  if (config_.resolution.kind == ResolutionKind::none) {
    resolution_.description = "none";
    return;
  }

  if (config_.resolution.kind == ResolutionKind::inactivity_leak) {
    std::ostringstream out;
    out << "inactivity leak " << config_.resolution.leak_rate.num << "/"
        << config_.resolution.leak_rate.den;
    std::optional<Height> resume;
    for (Height h = config_.attack.start_epoch; h <= config_.duration_epochs; ++h) {
      if (!halted_[h]) {
        resume = h;
        break;
      }
    }
    if (resume) out << ": finality resumed at epoch " << *resume;
    else out << ": finality did not resume within the run";
    resolution_.description = out.str();
    return;
  }

  // soft_fork_censor: pick a surviving branch, censor the misbehaving
  // validators on it, and reprice against the shrunken valid supply.
  std::optional<CheckpointId> survivor;
  if (!pairs.empty()) {
    std::set<CheckpointId> candidates;
    for (const auto& [a, b] : pairs) {
      candidates.insert(a);
      candidates.insert(b);
    }
    if (config_.resolution.preference == BranchPreference::most_burned) {
      Stake best = 0;
      for (const FinalizationRecord& rec : finalization_order_) {
        if (candidates.count(rec.checkpoint) == 0) continue;
        const Stake burned = nodes_.at(rec.region).view.burned();
        if (!survivor || burned > best) {
          survivor = rec.checkpoint;
          best = burned;
        }
      }
    }
    if (!survivor) {
      for (const FinalizationRecord& rec : finalization_order_) {
        if (candidates.count(rec.checkpoint) > 0) {
          survivor = rec.checkpoint;
          break;
        }
      }
    }
    for (const FinalizationRecord& rec : finalization_order_) {
      if (survivor && rec.checkpoint == *survivor) {
        resolution_region_ = rec.region;
        break;
      }
    }
  } else {
    survivor = audit().view.preferred_finalized_tip();
  }
  resolution_.surviving_branch = survivor;

  // Censor: everyone with double-vote evidence, plus everyone silent for
  // t_offline consecutive epochs. The latter rule cannot tell malice from
  // a long outage, so honest hits are tracked as false positives.
  std::set<ValidatorId> censored(evidenced_.begin(), evidenced_.end());
  const Height t_off = config_.resolution.t_offline_epochs;
  if (t_off > 0) {
    const FinalityState& view = audit().view;
    for (const ExpandedValidator& v : validators_) {
      Height run = 0;
      for (Height h = 1; h <= config_.duration_epochs; ++h) {
        run = view.has_voted(v.id, h) ? 0 : run + 1;
        if (run >= t_off) {
          censored.insert(v.id);
          break;
        }
      }
    }
  }

  FinalityState& chain = nodes_.at(resolution_region_).view;
  for (const ValidatorId& id : censored) {
    if (chain.validator(id).status != ValidatorStatus::slashed) {
      chain.slash_validator(id);
    }
    resolution_.censored.push_back(id);
  }
  for (const ExpandedValidator& v : validators_) {
    if (censored.count(v.id) > 0 && v.honest) {
      resolution_.false_positive_censored.push_back(v.id);
    }
  }

  if (config_.econ.has_velocity()) {
    // Valid long-run supply excludes burned coins; deposits unlock
    // eventually, burns never do.
    const double pre = econ::velocity_price(
        config_.econ.d_volume, config_.econ.velocity,
        static_cast<double>(config_.total_supply));
    const double post = econ::velocity_price(
        config_.econ.d_volume, config_.econ.velocity,
        static_cast<double>(config_.total_supply - chain.burned()));
    resolution_.pre_price = pre;
    resolution_.post_fork_price = post;
  }

  for (MerchantOutcome& m : merchants_) {
    if (m.accepted_at && survivor && chain.conflicts(m.payment, *survivor)) {
      m.reverted = true;
    }
  }

  std::ostringstream out;
  out << "soft fork";
  if (survivor) out << ": branch " << *survivor << " survives";
  out << "; censored " << resolution_.censored.size() << " validator(s)";
  resolution_.description = out.str();
}

ScenarioReport ScenarioRunner::run() {
  setup();
  sim_.run_until();
  resolve();
  return build_report();
}

ScenarioReport ScenarioRunner::build_report() {
  ScenarioReport report;
  switch (config_.attack.kind) {
    case AttackKind::none: report.scenario_kind = "baseline"; break;
    case AttackKind::double_spend: report.scenario_kind = "double_spend"; break;
    case AttackKind::sabotage: report.scenario_kind = "sabotage"; break;
  }
  report.duration_epochs = config_.duration_epochs;
  report.seed = config_.seed;

  report.conflicting_finalizations = collect_conflicts();

  report.merchants = merchants_;
  for (const MerchantOutcome& m : report.merchants) {
    if (m.accepted_at) ++report.merchants_accepted;
    if (m.reverted) {
      ++report.merchants_defrauded;
      report.defrauded_value += m.value;
    }
  }

  const FinalityState& chain = nodes_.at(resolution_region_).view;
  for (const ExpandedValidator& v : validators_) {
    if (!v.honest) {
      report.attacker_stake_burned += v.stake - chain.validator(v.id).deposit;
    }
  }

  for (Height h = config_.attack.start_epoch; h <= config_.duration_epochs; ++h) {
    if (config_.attack.kind == AttackKind::none) break;
    if (halted_[h]) ++report.finalization_halt_epochs;
    else if (!report.resume_epoch) report.resume_epoch = h;
  }

  switch (config_.attack.kind) {
    case AttackKind::double_spend:
      report.attacker_realized_value = report.defrauded_value;
      break;
    case AttackKind::sabotage:
      report.attacker_realized_value =
          report.finalization_halt_epochs > 0 ? config_.econ.v_attack : 0.0;
      break;
    case AttackKind::none:
      break;
  }
  if (config_.econ.has_price()) {
    report.stake_price = econ::price_from_flow(config_.econ.c, config_.econ.beta);
  }
  report.attacker_net = report.attacker_realized_value -
                        static_cast<double>(report.attacker_stake_burned) *
                            report.stake_price;

  report.finalized_total = audit().view.finalized().size();
  report.resolution = resolution_;
  report.honest_leaked = honest_leaked_;
  report.series = series_;
  report.trace = sim_.trace();
  report.events_processed = sim_.events_processed();
  report.warnings = audit().view.warnings();
  report.final_snapshot = audit().view.snapshot();
  return report;
}

}  // namespace

ScenarioReport run_scenario(const ScenarioConfig& config) {
  config.validate();
  ScenarioRunner runner(config);
  return runner.run();
}

ScenarioReport run_double_spend(const ScenarioConfig& config) {
  if (config.attack.kind != AttackKind::double_spend) {
    throw config_error("run_double_spend: config does not describe a double spend");
  }
  return run_scenario(config);
}

ScenarioReport run_sabotage(const ScenarioConfig& config) {
  if (config.attack.kind != AttackKind::sabotage) {
    throw config_error("run_sabotage: config does not describe a sabotage attack");
  }
  return run_scenario(config);
}

}  // namespace possim
