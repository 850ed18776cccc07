#include "possim/netsim.hpp"

#include <algorithm>
#include <sstream>

namespace possim {

bool LatencyModel::has_region(const RegionId& r) const {
  return std::find(regions.begin(), regions.end(), r) != regions.end();
}

Tick LatencyModel::delay_between(const RegionId& from, const RegionId& to) const {
  auto it = delay.find({from, to});
  return it != delay.end() ? it->second : default_delay;
}

Tick LatencyModel::delivery_time(const RegionId& from, const RegionId& to,
                                 Tick at) const {
  if (!has_region(from)) throw config_error("unknown region: " + from);
  if (!has_region(to)) throw config_error("unknown region: " + to);
  Tick depart = at;
  for (const Partition& p : partitions) {
    const bool covers = (p.a == from && p.b == to) || (p.a == to && p.b == from);
    if (covers && at >= p.start && at < p.end) depart = std::max(depart, p.end);
  }
  return depart + delay_between(from, to);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

namespace {

std::string checkpoint_text(const Checkpoint& cp) {
  std::ostringstream out;
  out << cp.id << " h=" << cp.height << " parent=" << cp.parent.value_or("-");
  return out.str();
}

std::string vote_text(const Vote& v) {
  std::ostringstream out;
  out << v.voter << "->" << v.target << " round=" << v.round << " w=" << v.weight;
  return out.str();
}

}  // namespace

std::string payload_text(const EventPayload& payload) {
  std::ostringstream out;
  if (const auto* d = std::get_if<DeliverCheckpoint>(&payload)) {
    out << "deliver_checkpoint to=" << d->to << " " << checkpoint_text(d->checkpoint);
  } else if (const auto* d = std::get_if<DeliverVote>(&payload)) {
    out << "deliver_vote to=" << d->to << " " << vote_text(d->vote);
  } else if (const auto* d = std::get_if<DeliverEvidence>(&payload)) {
    out << "deliver_evidence to=" << d->to << " offender=" << d->evidence.offender
        << " a=[" << vote_text(d->evidence.vote_a) << "] b=["
        << vote_text(d->evidence.vote_b) << "]";
  } else if (const auto* t = std::get_if<TimerFire>(&payload)) {
    out << "timer " << t->kind << " height=" << t->height;
  } else if (const auto* a = std::get_if<ScenarioAction>(&payload)) {
    out << "action " << a->label;
  }
  return out.str();
}

namespace {

const char* payload_kind(const EventPayload& payload) {
  switch (payload.index()) {
    case 0: return "deliver_checkpoint";
    case 1: return "deliver_vote";
    case 2: return "deliver_evidence";
    case 3: return "timer";
    default: return "action";
  }
}

}  // namespace

Simulation::Simulation(LatencyModel model, std::uint64_t seed)
    : model_(std::move(model)), rng_(seed) {}

void Simulation::schedule(Tick at, EventPayload payload) {
  if (at < now_) {
    throw event_in_past("schedule at tick " + std::to_string(at) + " but now is " +
                        std::to_string(now_));
  }
  queue_.push(SimEvent{at, next_seq_++, std::move(payload)});
}

ScheduledDelivery Simulation::send(const RegionId& from, const RegionId& to,
                                   Tick at, EventPayload payload) {
  Tick deliver = model_.delivery_time(from, to, at);
  if (max_jitter_ > 0) deliver += rng_.bounded(max_jitter_ + 1);
  schedule(deliver, std::move(payload));
  return ScheduledDelivery{to, deliver};
}

std::vector<ScheduledDelivery> Simulation::broadcast(
    const RegionId& from, Tick at,
    const std::function<EventPayload(const RegionId&)>& make) {
  if (!model_.has_region(from)) throw config_error("unknown region: " + from);
  std::vector<ScheduledDelivery> deliveries;
  deliveries.reserve(model_.regions.size());
  for (const RegionId& to : model_.regions) {
    deliveries.push_back(send(from, to, at, make(to)));
  }
  return deliveries;
}

void Simulation::run_until(std::optional<Tick> stop) {
  while (!queue_.empty()) {
    if (stop && queue_.top().fire_at > *stop) break;
    if (events_processed_ >= event_cap_) {
      throw livelock_suspected("event cap " + std::to_string(event_cap_) +
                               " exceeded at tick " + std::to_string(now_));
    }
    SimEvent event = queue_.top();
    queue_.pop();
    now_ = event.fire_at;
    ++events_processed_;

    std::ostringstream line;
    line << event.fire_at << " " << event.seq << " " << payload_kind(event.payload)
         << " " << std::hex << fnv1a64(payload_text(event.payload));
    trace_.push_back(line.str());

    if (handler_) handler_(*this, event);
  }
  if (stop && *stop > now_) now_ = *stop;
}

}  // namespace possim
