#include "possim/economics.hpp"

#include <cmath>

namespace possim::econ {

double equilibrium_stake(double p_block, double c) {
  if (!(c > 0)) throw econ_domain_error("equilibrium_stake: c must be positive");
  if (p_block < 0) throw econ_domain_error("equilibrium_stake: negative reward");
  return p_block / c;
}

double price_from_flow(double c, double beta) {
  if (c < 0) throw econ_domain_error("price_from_flow: negative yield");
  if (!(beta >= 0) || beta >= 1) {
    throw econ_domain_error("price_from_flow: beta must lie in [0, 1); the "
                            "discounted flow diverges at 1");
  }
  return c / (1.0 - beta);
}

double beta_per_block(double annual_discount, double block_interval_seconds) {
  if (!(annual_discount > 0) || annual_discount >= 1) {
    throw econ_domain_error("beta_per_block: annual discount must lie in (0, 1)");
  }
  if (!(block_interval_seconds > 0)) {
    throw econ_domain_error("beta_per_block: block interval must be positive");
  }
  return std::pow(annual_discount, block_interval_seconds / kSecondsPerYear);
}

double alpha_ether(double beta) {
  if (!(beta >= 0) || beta >= 1) {
    throw econ_domain_error("alpha_ether: beta must lie in [0, 1)");
  }
  return 1.0 / (2.0 * (1.0 - beta));
}

bool incentive_compatible(double v_attack, double n_attack, double price) {
  if (v_attack < 0 || n_attack < 0 || price < 0) {
    throw econ_domain_error("incentive_compatible: negative input");
  }
  return n_attack * price > v_attack;
}

double max_safe_attack_value(double p_block, double alpha) {
  if (!(alpha > 0)) throw econ_domain_error("max_safe_attack_value: alpha must be positive");
  if (p_block < 0) throw econ_domain_error("max_safe_attack_value: negative reward");
  return alpha * p_block;
}

double velocity_price(double d_volume, double velocity, double n_liquid) {
  if (!(velocity > 0)) throw econ_domain_error("velocity_price: velocity must be positive");
  if (!(n_liquid > 0)) throw econ_domain_error("velocity_price: liquid supply must be positive");
  if (d_volume < 0) throw econ_domain_error("velocity_price: negative transaction value");
  return d_volume / (velocity * n_liquid);
}

double liquid_payoff(double p_volatility, double n_liquid) {
  if (!(n_liquid > 0)) throw econ_domain_error("liquid_payoff: liquid supply must be positive");
  if (p_volatility < 0) throw econ_domain_error("liquid_payoff: negative volatility payoff");
  return p_volatility / n_liquid;
}

double p_volatility_from_shocks(std::span<const double> shocks, double velocity) {
  if (shocks.empty()) throw econ_domain_error("p_volatility_from_shocks: no samples");
  if (!(velocity > 0)) throw econ_domain_error("p_volatility_from_shocks: velocity must be positive");
  std::size_t positive = 0;
  double sum = 0.0;
  for (double shock : shocks) {
    if (shock > 0) {
      ++positive;
      sum += shock / velocity;
    }
  }
  if (positive == 0) return 0.0;
  const double p_up = static_cast<double>(positive) / static_cast<double>(shocks.size());
  const double mean_up = sum / static_cast<double>(positive);
  return p_up * mean_up;
}

double equilibrium_deposit(double p_block, double p_volatility, double n_total) {
  if (!(n_total > 0)) throw econ_domain_error("equilibrium_deposit: n_total must be positive");
  if (p_block < 0 || p_volatility < 0) {
    throw econ_domain_error("equilibrium_deposit: negative payoff");
  }
  if (p_block == 0 && p_volatility == 0) {
    throw no_equilibrium("equilibrium_deposit: both payoffs zero");
  }
  // Grouped so the symmetric case divides p by exactly 2p and lands on
  // n_total / 2 without rounding.
  return n_total * (p_block / (p_block + p_volatility));
}

double beta_from_liquid_payoff(double r_liquid, BetaConvention convention) {
  if (r_liquid < 0) throw econ_domain_error("beta_from_liquid_payoff: negative payoff");
  switch (convention) {
    case BetaConvention::direct:
      if (r_liquid >= 1) {
        throw econ_domain_error("beta_from_liquid_payoff: direct convention needs r < 1");
      }
      return r_liquid;
    case BetaConvention::discount_rate:
      return 1.0 / (1.0 + r_liquid);
  }
  throw econ_domain_error("beta_from_liquid_payoff: bad convention");
}

EconomicParams EconomicParams::derive(double p_block, double c, double beta,
                                      double v_attack) {
  EconomicParams params;
  params.p_block = p_block;
  params.c = c;
  params.beta = beta;
  params.price = price_from_flow(c, beta);
  params.n_star = equilibrium_stake(p_block, c);
  params.n_attack = params.n_star / 2.0;
  params.v_attack = v_attack;
  params.alpha = alpha_ether(beta);
  return params;
}

}  // namespace possim::econ
