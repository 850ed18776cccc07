// Economic-security calculator: equilibrium stake from block rewards,
// stake price as a discounted flow of per-unit yield, the attack-deterrence
// inequality, the proof-of-work comparison coefficient, and the
// velocity/liquid-payoff model behind the equilibrium deposit split.
//
// Everything here is a pure function over doubles. The consensus path never
// calls into this module; prices only enter reports.
#pragma once

#include <span>
#include <stdexcept>

namespace possim::econ {

class econ_domain_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class no_equilibrium : public econ_domain_error {
 public:
  using econ_domain_error::econ_domain_error;
};

inline constexpr double kSecondsPerYear = 31'536'000.0;  // 365 days
// Benchmark security coefficient for a proof-of-work chain.
inline constexpr double kAlphaPowBenchmark = 3.35;

// Equilibrium total stake: depositors enter until the per-unit opportunity
// cost eats the whole block reward, N* c = P_block.
double equilibrium_stake(double p_block, double c);

// Unit stake price as the discounted sum of its per-block yield:
// C = c (1 + beta + beta^2 + ...) = c / (1 - beta). Requires beta < 1.
double price_from_flow(double c, double beta);

// Per-block discount factor implied by an annualized one.
double beta_per_block(double annual_discount, double block_interval_seconds);

// Security coefficient of the stake-deposit chain: alpha = 1 / (2 (1 - beta)).
double alpha_ether(double beta);

// Attack deterrence: the stake an attacker must buy and lose is worth more
// than the attack, N_attack * C > V_attack. Strict: equality does not deter.
bool incentive_compatible(double v_attack, double n_attack, double price);

// Largest deterred attack value for a given per-block reward: alpha * P_block.
double max_safe_attack_value(double p_block, double alpha);

// Exchange rate from transaction demand, velocity, and liquid supply:
// p = D / (v * N_liquid).
double velocity_price(double d_volume, double velocity, double n_liquid);

// Expected per-unit payoff of holding a liquid unit: P_volatility / N_liquid.
double liquid_payoff(double p_volatility, double n_liquid);

// Empirical P_volatility from demand-shock samples:
// (fraction of positive shocks) * mean(shock / v) over the positive ones.
double p_volatility_from_shocks(std::span<const double> shocks, double velocity);

// Deposit level equating the staking yield P_block / N_deposit with the
// liquid payoff P_volatility / (N_total - N_deposit):
//   N_deposit* = N_total * P_block / (P_block + P_volatility).
// P_volatility = 0 pins everything staked; P_block = 0 pins nothing staked.
double equilibrium_deposit(double p_block, double p_volatility, double n_total);

// How to map a liquid payoff onto the discount factor of price_from_flow.
// `direct` substitutes beta := r_liquid; `discount_rate` reads r_liquid as
// an interest rate, beta := 1 / (1 + r_liquid).
enum class BetaConvention { direct, discount_rate };

double beta_from_liquid_payoff(double r_liquid,
                               BetaConvention convention = BetaConvention::direct);

// Every section-4 symbol in one place, derivable from the three primitives.
struct EconomicParams {
  double p_block = 0;    // reward per block
  double c = 0;          // opportunity cost per stake unit per block
  double beta = 0;       // per-block discount factor, < 1
  double price = 0;      // C, unit stake price
  double n_star = 0;     // equilibrium total stake
  double n_attack = 0;   // stake needed for an attack (default n_star / 2)
  double v_attack = 0;   // one-shot attack value (exogenous)
  double alpha = 0;      // security coefficient

  // An outside attacker must supply half of the existing stakes to reach
  // the 1/3 equivocation share, so n_attack defaults to n_star / 2.
  static EconomicParams derive(double p_block, double c, double beta,
                               double v_attack = 0.0);

  bool deterred() const { return incentive_compatible(v_attack, n_attack, price); }
};

struct PoWComparison {
  double alpha_pow = kAlphaPowBenchmark;
  bool chips_repurposable = true;
};

struct VelocityModel {
  double d_volume = 0;      // dollar transaction value per period
  double velocity = 1;      // turnover rate of a liquid unit
  double n_total = 0;       // fixed total supply (deposit + liquid)
  double n_deposit = 0;
  double n_liquid = 0;      // n_total - n_deposit
  double p_volatility = 0;  // expected payoff from demand volatility
  double r_liquid = 0;      // per-unit expected liquid payoff

  double price() const { return velocity_price(d_volume, velocity, n_liquid); }
};

}  // namespace possim::econ
