#include <doctest.h>

#include <cmath>
#include <vector>

#include "fbauction/baselines.hpp"
#include "fbauction/error.hpp"
#include "fbauction/experiment.hpp"
#include "fbauction/metrics.hpp"
#include "support.hpp"

using namespace fba;

namespace {

std::vector<AgentSpec> constant_means(std::vector<double> mu) {
  std::vector<AgentSpec> specs;
  for (double m : mu) specs.push_back({{m}, {}, {}, {}});
  return specs;
}

double final_welfare(const Run& r, std::size_t agents) {
  return compute_metrics(r.records, agents).cumulative_welfare_regret.back();
}

}  // namespace

TEST_SUITE("baselines") {
  TEST_CASE("oracle allocates to the best agent at the true second price") {
    testing::FixedUtilityOracle o({0.8, 0.2});
    const auto specs = constant_means({0.8, 0.2});
    const RoundRecord r = oracle_round(specs, testing::unit_contexts(2), o);
    CHECK(r.allocated == 0);
    CHECK(r.payment == 0.2);
    CHECK(r.truth.oracle_second_price == 0.2);
    CHECK(welfare_regret(std::span(&r, 1))[0] == 0.0);
  }

  TEST_CASE("oracle with identical means picks agent 0 at that value") {
    testing::FixedUtilityOracle o({0.6, 0.6, 0.6});
    const auto specs = constant_means({0.6, 0.6, 0.6});
    const RoundRecord r = oracle_round(specs, testing::unit_contexts(3), o);
    CHECK(r.allocated == 0);
    CHECK(r.payment == 0.6);
    CHECK(welfare_regret(std::span(&r, 1))[0] == 0.0);
  }

  TEST_CASE("oracle has zero regret and is individually rational round by round") {
    RngStream g = derive_stream(2, "oracle");
    std::vector<AgentSpec> specs;
    for (int i = 0; i < 6; ++i) specs.push_back({sample_theta(4, g), {}, {}, {}});
    testing::LinearAgentsOracle agents(specs, 3);
    std::vector<RoundRecord> recs;
    for (std::uint64_t t = 1; t <= 500; ++t) {
      std::vector<Context> ctx;
      for (int i = 0; i < 6; ++i) ctx.push_back(sample_simplex_context(4, g));
      agents.set_contexts(ctx);
      recs.push_back(oracle_round(specs, ctx, agents, t));
      const auto& r = recs.back();
      REQUIRE(r.payment <= r.truth.true_means[r.allocated]);
    }
    for (double x : welfare_regret(recs)) REQUIRE(x == 0.0);
    for (double x : revenue_regret(recs)) REQUIRE(x == 0.0);
    CHECK_THROWS_AS(OracleAuction(1), ConfigError);
  }

  TEST_CASE("uniform allocation with one agent always picks it") {
    UniformAllocation u(1, 4);
    testing::FixedUtilityOracle o({0.3});
    for (int i = 0; i < 100; ++i) {
      const RoundRecord r = u.run_round(testing::unit_contexts(1), o);
      REQUIRE(r.allocated == 0);
      REQUIRE(r.payment == 0.0);
    }
  }

  TEST_CASE("uniform allocation earns the average mean") {
    const std::vector<double> mu{0.9, 0.4, 0.1, 0.6};
    UniformAllocation u(4, 5);
    testing::FixedUtilityOracle o(mu);
    double welfare = 0.0;
    const int rounds = 100000;
    for (int i = 0; i < rounds; ++i) welfare += mu[u.run_round(testing::unit_contexts(4), o).allocated];
    CHECK(std::abs(welfare / rounds - 0.5) < 0.005);
  }

  TEST_CASE("uniform welfare regret grows linearly") {
    ExperimentConfig cfg = testing::default_synthetic(5000);
    cfg.mechanism = MechanismId::uniform;
    const auto runs = simulate_sweep(cfg, {false});
    const auto mean = testing::cross_seed_mean(
        runs, [](const Run& r) { return compute_metrics(r.records, 10).cumulative_welfare_regret; });
    CHECK(std::abs(regret_slope(mean) - 1.0) < 0.05);
  }

  TEST_CASE("direct regression explores exactly like the feedback mechanism") {
    ExperimentConfig cfg = testing::default_synthetic(5000);
    cfg.noise.width = 0.0;
    cfg.seed_count = 5;
    const auto fb = simulate_sweep(cfg, {false});
    cfg.mechanism = MechanismId::direct_regression;
    const auto dr = simulate_sweep(cfg, {false});
    std::size_t agree = 0, exploit = 0;
    double dr_tail_regret = 0.0;
    for (std::size_t s = 0; s < fb.size(); ++s) {
      const auto inc = welfare_regret(dr[s].records);
      for (std::size_t t = 0; t < cfg.horizon; ++t) {
        const auto& a = fb[s].records[t];
        const auto& b = dr[s].records[t];
        REQUIRE(a.explored == b.explored);
        if (a.explored) {
          REQUIRE(a.allocated == b.allocated);
          REQUIRE(a.comparison_price() == b.comparison_price());
        } else if (t >= cfg.horizon / 2) {
          ++exploit;
          agree += a.allocated == b.allocated;
          dr_tail_regret += inc[t];
        }
      }
    }
    const double rate = double(agree) / double(exploit);
    MESSAGE("noise-free tail exploitation winners shared with direct regression: " << rate);
    // Noise-free utility regression is exact after d samples per agent.
    CHECK(dr_tail_regret < 1e-6);
    CHECK(rate > 0.5);
  }

  TEST_CASE("direct regression regret is comparable to the feedback mechanism") {
    ExperimentConfig cfg;
    const auto fb = simulate_sweep(cfg, {false});
    cfg.mechanism = MechanismId::direct_regression;
    const auto dr = simulate_sweep(cfg, {false});
    double f = 0.0, d = 0.0;
    for (const auto& r : fb) f += final_welfare(r, cfg.agents);
    for (const auto& r : dr) d += final_welfare(r, cfg.agents);
    MESSAGE("H=5000 d=30 mean welfare regret: feedback " << f / 20 << ", direct regression " << d / 20);
    CHECK(f <= 2.0 * d);
    CHECK(d <= 2.0 * f);
  }
}
