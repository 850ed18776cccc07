// Deterministic discrete-event simulation of message propagation between
// latency regions, with partitions. The event trace is a pure function of
// (config, seed): events process in (fire_at, seq) order, seq assigned from
// a monotone counter at schedule time, and the only randomness is an
// explicitly seeded generator with a fixed algorithm.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <variant>
#include <vector>

#include "possim/core.hpp"
#include "possim/finality.hpp"

namespace possim {

class event_in_past : public state_error {
 public:
  using state_error::state_error;
};

class livelock_suspected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// splitmix64: the simulator's only randomness source. The algorithm is part
// of the trace format contract, so traces reproduce across toolchains.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, bound) by rejection; bound 0 yields 0.
  std::uint64_t bounded(std::uint64_t bound) {
    if (bound == 0) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % bound;
  }

  double unit_double() { return (next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

struct LatencyModel {
  struct Partition {
    RegionId a, b;       // unordered pair; both directions blocked
    Tick start = 0;      // active over [start, end)
    Tick end = 0;
  };

  std::vector<RegionId> regions;
  Tick default_delay = 0;
  std::map<std::pair<RegionId, RegionId>, Tick> delay;  // directional overrides
  std::vector<Partition> partitions;

  bool has_region(const RegionId& r) const;
  Tick delay_between(const RegionId& from, const RegionId& to) const;

  // Messages sent while a partition covers the link wait for the
  // partition to lift, then travel with the usual delay.
  Tick delivery_time(const RegionId& from, const RegionId& to, Tick at) const;
};

struct DeliverCheckpoint {
  RegionId to;
  Checkpoint checkpoint;
};

struct DeliverVote {
  RegionId to;
  Vote vote;
};

struct DeliverEvidence {
  RegionId to;
  SlashingEvidence evidence;
};

struct TimerFire {
  std::string kind;  // e.g. "epoch_open", "cast_votes", "epoch_close"
  Height height = 0;
};

struct ScenarioAction {
  std::string label;
};

using EventPayload = std::variant<DeliverCheckpoint, DeliverVote, DeliverEvidence,
                                  TimerFire, ScenarioAction>;

struct SimEvent {
  Tick fire_at = 0;
  std::uint64_t seq = 0;
  EventPayload payload;
};

// Canonical one-line description of a payload; its FNV-1a 64 digest is what
// the trace records.
std::string payload_text(const EventPayload& payload);
std::uint64_t fnv1a64(std::string_view bytes);

struct ScheduledDelivery {
  RegionId region;
  Tick at;
};

class Simulation {
 public:
  using Handler = std::function<void(Simulation&, const SimEvent&)>;

  Simulation(LatencyModel model, std::uint64_t seed);

  Tick now() const { return now_; }
  const LatencyModel& latency() const { return model_; }
  SplitMix64& rng() { return rng_; }

  void set_handler(Handler handler) { handler_ = std::move(handler); }
  // Per-delivery jitter in [0, max_jitter] ticks, drawn from the seeded
  // generator. Default 0: delays are exactly the model's.
  void set_max_jitter(Tick max_jitter) { max_jitter_ = max_jitter; }
  void set_event_cap(std::uint64_t cap) { event_cap_ = cap; }

  // pre: at >= now(); scheduling in the past is a scenario bug.
  void schedule(Tick at, EventPayload payload);

  // Single targeted delivery through the latency model.
  ScheduledDelivery send(const RegionId& from, const RegionId& to, Tick at,
                         EventPayload payload);

  // One delivery per region (the sender's own region included), each routed
  // through the latency model. `make` builds the per-region payload.
  std::vector<ScheduledDelivery> broadcast(
      const RegionId& from, Tick at,
      const std::function<EventPayload(const RegionId&)>& make);

  // Processes events in (fire_at, seq) order until the queue drains or, if
  // `stop` is set, until every event with fire_at <= stop has run. Throws
  // livelock_suspected past the event cap.
  void run_until(std::optional<Tick> stop = std::nullopt);

  const std::vector<std::string>& trace() const { return trace_; }
  std::uint64_t events_processed() const { return events_processed_; }

  static constexpr std::uint64_t kDefaultEventCap = 10'000'000;

 private:
  struct Later {
    bool operator()(const SimEvent& a, const SimEvent& b) const {
      if (a.fire_at != b.fire_at) return a.fire_at > b.fire_at;
      return a.seq > b.seq;
    }
  };

  LatencyModel model_;
  SplitMix64 rng_;
  Handler handler_;
  Tick now_ = 0;
  Tick max_jitter_ = 0;
  std::uint64_t next_seq_ = 0;
  std::uint64_t event_cap_ = kDefaultEventCap;
  std::uint64_t events_processed_ = 0;
  std::priority_queue<SimEvent, std::vector<SimEvent>, Later> queue_;
  std::vector<std::string> trace_;
};

}  // namespace possim
