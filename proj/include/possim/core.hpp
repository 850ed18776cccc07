// Shared domain types for the checkpoint-finality simulator: stake units,
// validators, checkpoints, votes, and exact threshold arithmetic.
//
// All stake accounting is integer-exact. Quorum comparisons never touch
// floating point; they cross-multiply in 128-bit so the 2/3 boundary is a
// literal one-unit edge.
#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>

namespace possim {

using Stake = std::uint64_t;  // smallest indivisible stake unit
using Tick = std::uint64_t;   // simulated time, 1 tick = 1 second
using Height = std::uint64_t; // checkpoint index (one per 100 blocks)
using Round = std::uint64_t;  // vote round; scenarios use round == height

using ValidatorId = std::string;
using CheckpointId = std::string;
using RegionId = std::string;

// Default protocol timing: blocks every 15s, a checkpoint every 100 blocks,
// deposits withdrawable 4 months (of 30 days) after an exit request.
inline constexpr Tick kDefaultBlockIntervalSeconds = 15;
inline constexpr std::uint64_t kBlocksPerCheckpoint = 100;
inline constexpr Tick kDefaultWithdrawalDelaySeconds =
    Tick{4} * 30 * 24 * 3600;

class domain_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class state_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class insufficient_liquid_supply : public state_error {
 public:
  using state_error::state_error;
};

class not_yet_withdrawable : public state_error {
 public:
  using state_error::state_error;
};

// part/total as an exact rational. Comparisons cross-multiply in 128 bits,
// so they are exact for any representable stake amounts.
struct Fraction {
  Stake num = 0;
  Stake den = 1;

  static Fraction of(Stake part, Stake total) {
    if (total == 0) throw domain_error("stake fraction: zero total");
    if (part > total) throw domain_error("stake fraction: part exceeds total");
    return Fraction{part, total};
  }

  Fraction reduced() const {
    const Stake g = std::gcd(num, den);
    return Fraction{num / g, den / g};
  }

  friend bool operator==(const Fraction& a, const Fraction& b) {
    using u128 = unsigned __int128;
    return static_cast<u128>(a.num) * b.den == static_cast<u128>(b.num) * a.den;
  }
  friend std::strong_ordering operator<=>(const Fraction& a, const Fraction& b) {
    using u128 = unsigned __int128;
    const u128 lhs = static_cast<u128>(a.num) * b.den;
    const u128 rhs = static_cast<u128>(b.num) * a.den;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  double as_double() const { return static_cast<double>(num) / static_cast<double>(den); }
};

inline Fraction stake_fraction(Stake part, Stake total) { return Fraction::of(part, total); }

// Finalization quorum: weight covering at least 2/3 of the slashable total.
// The threshold is inclusive (3w == 2t finalizes).
inline bool meets_two_thirds(Stake part, Stake total) {
  using u128 = unsigned __int128;
  return static_cast<u128>(part) * 3 >= static_cast<u128>(total) * 2;
}

// Strictly more than 1/3: enough to withhold finality or to equivocate.
inline bool exceeds_one_third(Stake part, Stake total) {
  using u128 = unsigned __int128;
  return static_cast<u128>(part) * 3 > static_cast<u128>(total);
}

enum class ValidatorStatus { active, exiting, withdrawn, slashed };

inline const char* to_string(ValidatorStatus s) {
  switch (s) {
    case ValidatorStatus::active: return "active";
    case ValidatorStatus::exiting: return "exiting";
    case ValidatorStatus::withdrawn: return "withdrawn";
    case ValidatorStatus::slashed: return "slashed";
  }
  return "?";
}

struct ValidatorState {
  ValidatorId id;
  RegionId region;
  Stake deposit = 0;
  ValidatorStatus status = ValidatorStatus::active;
  // Set while exiting; the deposit stays slashable until this tick.
  std::optional<Tick> withdrawable_at;
  // Scenario metadata only. Protocol logic never reads this flag.
  bool honest = true;

  bool slashable() const {
    return status == ValidatorStatus::active || status == ValidatorStatus::exiting;
  }
};

// Checkpoints form a tree; height increases by exactly 1 along any parent
// edge. The genesis checkpoint has height 0 and no parent.
struct Checkpoint {
  CheckpointId id;
  Height height = 0;
  std::optional<CheckpointId> parent;
};

struct Vote {
  ValidatorId voter;
  CheckpointId target;
  Round round = 0;
  Stake weight = 0;  // voter's deposit at cast time

  friend bool operator==(const Vote&, const Vote&) = default;
};

}  // namespace possim
