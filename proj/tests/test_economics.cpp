#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "possim/economics.hpp"
#include "possim/netsim.hpp"

using namespace possim;
using namespace possim::econ;

namespace {

// Deterministic standard normals (Box-Muller over splitmix64), so the
// Monte-Carlo checks do not depend on the standard library's distribution.
std::vector<double> normal_samples(std::size_t n, double sigma, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<double> out;
  out.reserve(n);
  while (out.size() < n) {
    const double u1 = std::max(rng.unit_double(), 1e-300);
    const double u2 = rng.unit_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    out.push_back(sigma * r * std::cos(2.0 * M_PI * u2));
    if (out.size() < n) out.push_back(sigma * r * std::sin(2.0 * M_PI * u2));
  }
  return out;
}

}  // namespace

TEST_CASE("equilibrium stake balances reward against opportunity cost") {
  CHECK(equilibrium_stake(100, 0.01) == doctest::Approx(10'000));
  CHECK(equilibrium_stake(0, 1) == 0);
  const double c = 0.037;
  CHECK(c == doctest::Approx(100.0 / equilibrium_stake(100, c)));  // round-trip
  CHECK_THROWS_AS(equilibrium_stake(1, 0), econ_domain_error);
}

TEST_CASE("price is the closed form of the discounted yield flow") {
  CHECK(price_from_flow(1, 0) == 1);
  CHECK(price_from_flow(1, 0.5) == 2);
  CHECK_THROWS_AS(price_from_flow(1, 1.0), econ_domain_error);
  CHECK_THROWS_AS(price_from_flow(1, 1.5), econ_domain_error);
}

TEST_CASE("closed form agrees with a 1e8-term partial sum at high beta") {
  const double beta = 0.9999996;
  const double c = 0.7;
  long double sum = 0.0L;
  long double term = 1.0L;
  for (long i = 0; i < 100'000'000; ++i) {
    sum += term;
    term *= beta;
  }
  const double partial = static_cast<double>(c * sum);
  const double closed = price_from_flow(c, beta);
  CHECK(std::abs(partial - closed) / closed < 1e-3);
  CHECK(closed == doctest::Approx(2.5e6 * c).epsilon(1e-6));
}

TEST_CASE("geometric-sum consistency across the beta range") {
  for (double beta : {0.0, 0.1, 0.5, 0.9, 0.99, 0.999999, 1 - 1e-9}) {
    for (double c : {0.001, 1.0, 37.5}) {
      CHECK(price_from_flow(c, beta) * (1 - beta) == doctest::Approx(c).epsilon(1e-12));
    }
  }
}

TEST_CASE("per-block discount factor from an annualized one") {
  const double beta = beta_per_block(0.98, 600);
  CHECK(beta >= 0.9999995);
  CHECK(beta <= 0.9999997);
  CHECK(beta_per_block(0.98, kSecondsPerYear) == doctest::Approx(0.98));

  // strictly increasing in the annual discount, decreasing in the interval
  CHECK(beta_per_block(0.99, 600) > beta);
  CHECK(beta_per_block(0.98, 60) > beta);
  CHECK(beta_per_block(0.98, 1) < 1.0);

  CHECK_THROWS_AS(beta_per_block(0.98, 0), econ_domain_error);
  CHECK_THROWS_AS(beta_per_block(0.0, 600), econ_domain_error);
  CHECK_THROWS_AS(beta_per_block(1.0, 600), econ_domain_error);
}

TEST_CASE("security coefficient of the stake chain") {
  CHECK(alpha_ether(0.5) == 1);
  const double alpha = alpha_ether(0.9999996);
  CHECK(alpha >= 1e6);
  CHECK(alpha <= 2e6);
  CHECK(alpha == doctest::Approx(1.25e6).epsilon(1e-6));
  CHECK_THROWS_AS(alpha_ether(1.0), econ_domain_error);
}

TEST_CASE("alpha crosses the proof-of-work benchmark where the algebra says") {
  // Bisect alpha_ether(beta) == 3.35 and compare with 1 - 1/6.7.
  double lo = 0.0, hi = 0.999;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (alpha_ether(mid) < kAlphaPowBenchmark) lo = mid;
    else hi = mid;
  }
  const double crossing = 0.5 * (lo + hi);
  CHECK(crossing == doctest::Approx(1.0 - 1.0 / 6.7).epsilon(1e-9));
  CHECK(alpha_ether(crossing + 1e-6) > kAlphaPowBenchmark);
  CHECK(alpha_ether(crossing - 1e-6) < kAlphaPowBenchmark);
}

TEST_CASE("deterrence is a strict inequality") {
  CHECK(incentive_compatible(100, 50, 3));         // 150 > 100
  CHECK_FALSE(incentive_compatible(150, 50, 3));   // equality does not deter
  CHECK_FALSE(incentive_compatible(151, 50, 3));
}

TEST_CASE("the two deterrence routes agree away from the boundary") {
  SplitMix64 rng(31337);
  for (int i = 0; i < 2'000; ++i) {
    const double p_block = 0.1 + 100.0 * rng.unit_double();
    const double c = 1e-4 + rng.unit_double();
    const double beta = rng.unit_double() * 0.999999;
    const double n_star = equilibrium_stake(p_block, c);
    const double price = price_from_flow(c, beta);
    const double bound = max_safe_attack_value(p_block, alpha_ether(beta));
    for (double theta : {0.25, 0.5, 0.9999, 1.0001, 2.0, 10.0}) {
      const double v_attack = theta * bound;
      if (std::abs(v_attack - bound) <= 1e-9 * bound) continue;
      const bool via_stake = incentive_compatible(v_attack, n_star / 2.0, price);
      const bool via_alpha = v_attack < bound;
      REQUIRE(via_stake == via_alpha);
    }
  }
}

TEST_CASE("largest deterred attack value") {
  CHECK(max_safe_attack_value(1, kAlphaPowBenchmark) == doctest::Approx(3.35));
  const double alpha = 1.25e6;
  CHECK(max_safe_attack_value(1, alpha) == doctest::Approx(1.25e6));
  CHECK(max_safe_attack_value(1, alpha) / max_safe_attack_value(1, kAlphaPowBenchmark) >
        1e5);
  CHECK(max_safe_attack_value(0, 7) == 0);
}

TEST_CASE("velocity price") {
  CHECK(velocity_price(100, 2, 25) == 2);
  CHECK(velocity_price(100, 2, 12.5) == 4);  // halving the liquid supply doubles p
  CHECK(velocity_price(0, 2, 25) == 0);
  CHECK_THROWS_AS(velocity_price(100, 0, 25), econ_domain_error);
  CHECK_THROWS_AS(velocity_price(100, 2, 0), econ_domain_error);
}

TEST_CASE("liquid payoff is inversely proportional to the liquid supply") {
  CHECK(liquid_payoff(50, 100) == 0.5);
  CHECK(liquid_payoff(50, 200) == 0.25);
  CHECK(liquid_payoff(0, 100) == 0);
  CHECK_THROWS_AS(liquid_payoff(50, 0), econ_domain_error);
}

TEST_CASE("volatility payoff from demand shocks") {
  const std::vector<double> tiny{-1, 1};
  CHECK(p_volatility_from_shocks(tiny, 1) == 0.5);

  const std::vector<double> negative{-3, -1, -0.5};
  CHECK(p_volatility_from_shocks(negative, 1) == 0);

  CHECK_THROWS_AS(p_volatility_from_shocks({}, 1), econ_domain_error);
  CHECK_THROWS_AS(p_volatility_from_shocks(tiny, 0), econ_domain_error);
}

TEST_CASE("volatility estimator converges on the half-normal mean") {
  const double sigma = 2.5;
  const double v = 3.0;
  const auto samples = normal_samples(1'000'000, sigma, 8675309);
  const double estimate = p_volatility_from_shocks(samples, v);
  const double expected = 0.5 * sigma * std::sqrt(2.0 / M_PI) / v;
  CHECK(std::abs(estimate - expected) / expected < 0.01);
}

TEST_CASE("volatility estimator is order-invariant") {
  auto samples = normal_samples(10'000, 1.0, 424242);
  const double forward = p_volatility_from_shocks(samples, 2.0);
  std::reverse(samples.begin(), samples.end());
  const double backward = p_volatility_from_shocks(samples, 2.0);
  SplitMix64 rng(5);
  for (std::size_t i = samples.size(); i > 1; --i) {
    std::swap(samples[i - 1], samples[rng.bounded(i)]);
  }
  const double shuffled = p_volatility_from_shocks(samples, 2.0);
  CHECK(forward == doctest::Approx(backward).epsilon(1e-12));
  CHECK(forward == doctest::Approx(shuffled).epsilon(1e-12));
}

TEST_CASE("equilibrium deposit: closed form, edges, symmetry") {
  CHECK(equilibrium_deposit(3, 1, 4000) == doctest::Approx(3000).epsilon(1e-12));
  CHECK(equilibrium_deposit(1, 0, 777) == 777);   // nothing to hold liquid for
  CHECK(equilibrium_deposit(0, 1, 777) == 0);     // nothing to stake for
  CHECK_THROWS_AS(equilibrium_deposit(0, 0, 777), no_equilibrium);

  for (double p : {0.3, 1.0, 7.0, 123.456}) {
    CHECK(equilibrium_deposit(p, p, 1000) == 500.0);  // exactly, not approximately
  }
}

TEST_CASE("equilibrium deposit matches a bisection oracle") {
  SplitMix64 rng(1111);
  for (int i = 0; i < 100; ++i) {
    const double p_block = 0.01 + 10 * rng.unit_double();
    const double p_vol = 0.01 + 10 * rng.unit_double();
    const double n_total = 10 + 1e6 * rng.unit_double();

    // Bisect c(n_d) - r_liquid(n_total - n_d), which is strictly decreasing.
    double lo = n_total * 1e-12, hi = n_total * (1 - 1e-12);
    for (int step = 0; step < 200; ++step) {
      const double mid = 0.5 * (lo + hi);
      const double gap = p_block / mid - p_vol / (n_total - mid);
      if (gap > 0) lo = mid;
      else hi = mid;
    }
    const double oracle = 0.5 * (lo + hi);
    const double closed = equilibrium_deposit(p_block, p_vol, n_total);
    REQUIRE(std::abs(closed - oracle) / n_total < 1e-9);

    // interior balance: staking yield equals liquid payoff
    const double imbalance =
        std::abs(p_block / closed - p_vol / (n_total - closed));
    REQUIRE(imbalance < 1e-9 * (p_block / closed));
  }
}

TEST_CASE("equilibrium deposit is strictly increasing in the block reward") {
  double previous = 0;
  for (double p_block = 0.5; p_block <= 8.0; p_block += 0.5) {
    const double n_d = equilibrium_deposit(p_block, 2.0, 1000);
    CHECK(n_d > previous);
    previous = n_d;
  }
}

TEST_CASE("beta conventions for the liquid payoff") {
  CHECK(beta_from_liquid_payoff(0.3) == 0.3);  // direct substitution default
  CHECK(beta_from_liquid_payoff(0.3, BetaConvention::discount_rate) ==
        doctest::Approx(1.0 / 1.3));
  CHECK_THROWS_AS(beta_from_liquid_payoff(1.5, BetaConvention::direct),
                  econ_domain_error);
  CHECK(beta_from_liquid_payoff(1.5, BetaConvention::discount_rate) ==
        doctest::Approx(0.4));
}

TEST_CASE("derived parameter bundle is internally consistent") {
  const auto params = EconomicParams::derive(100, 0.01, 0.5, 15'000);
  CHECK(params.n_star == doctest::Approx(10'000));
  CHECK(params.price == doctest::Approx(0.02));
  CHECK(params.n_attack == doctest::Approx(5'000));
  CHECK(params.alpha == doctest::Approx(1.0));
  // attack cost 5,000 * 0.02 = 100 = alpha * p_block; 15,000 > 100
  CHECK_FALSE(params.deterred());
}

TEST_CASE("proof-of-work comparison and velocity model bundles") {
  const PoWComparison pow;
  CHECK(pow.alpha_pow == kAlphaPowBenchmark);
  // with repurposable mining hardware only the flow cost is at risk, so
  // the stake chain with high beta towers over the benchmark
  CHECK(alpha_ether(0.9999996) / pow.alpha_pow > 1e5);

  VelocityModel model;
  model.d_volume = 100;
  model.velocity = 2;
  model.n_total = 40;
  model.n_deposit = 15;
  model.n_liquid = model.n_total - model.n_deposit;
  CHECK(model.price() == doctest::Approx(2.0));
  model.p_volatility = 50;
  model.r_liquid = liquid_payoff(model.p_volatility, model.n_liquid);
  CHECK(model.r_liquid == doctest::Approx(2.0));
}
