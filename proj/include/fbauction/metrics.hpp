#pragma once

// Regret, estimation-error and profit accounting over completed ledgers. All
// functions read only RoundRecord fields, so they apply to every mechanism
// and baseline alike. Ground truth comes from RoundRecord::truth.

#include <cstddef>
#include <span>
#include <vector>

#include "fbauction/core.hpp"
#include "fbauction/run.hpp"

namespace fba {

struct MetricsOptions {
  /// Count free exploration allocations toward mechanism welfare. When false,
  /// exploration rounds contribute no welfare regret.
  bool count_exploration_welfare = true;
};

/// max_i mu_i - mu_allocated per round.
std::vector<double> welfare_regret(std::span<const RoundRecord> records, MetricsOptions options = {});

/// gamma_t - p_t per round, gamma_t the true second-highest mean.
std::vector<double> revenue_regret(std::span<const RoundRecord> records);

/// max_k |mu_k - estimate_k| per round using exploration-trained estimates;
/// NaN for rounds that carry no estimates (uniform allocation).
std::vector<double> delta_trace(std::span<const RoundRecord> records);

/// Prefix sums of (allocated ? mu_agent : 0) - payment for one agent.
std::vector<double> ir_ledger(std::span<const RoundRecord> records, AgentIndex agent);

/// Sum over `agent`'s allocations of mu - p in the deviant run minus the same
/// in the truthful run. Throws InputError unless both runs share seed, horizon
/// and every config key other than deviant.strategy.
double strategic_profit(const Run& truthful, const Run& deviant, AgentIndex agent);

/// Per-round strategic profit increments (deviant minus truthful), same checks.
std::vector<double> strategic_profit_increments(const Run& truthful, const Run& deviant, AgentIndex agent);

/// Least-squares slope of log(cumulative) on log(t) over the last
/// `tail_fraction` of rounds (t is 1-based). Throws InputError on a
/// non-positive value in the window or fewer than two points.
double regret_slope(std::span<const double> cumulative, double tail_fraction = 0.5);

std::vector<double> prefix_sum(std::span<const double> increments);

struct AgentWelfare {
  std::size_t allocations = 0;
  double welfare = 0.0;     // sum of mu over the agent's allocations
  double shortfall = 0.0;   // sum of (1 - mu) over the agent's allocations
  double regret = 0.0;      // welfare regret of the rounds the agent received
  double payments = 0.0;
};

/// Per-agent breakdown; the regret column sums to the total welfare regret.
std::vector<AgentWelfare> agent_welfare(std::span<const RoundRecord> records, std::size_t agents,
                                        MetricsOptions options = {});

struct MetricsSeries {
  std::vector<double> welfare_regret_increment;
  std::vector<double> revenue_regret_increment;
  std::vector<double> delta;
  std::vector<double> eta;
  std::vector<double> cumulative_welfare_regret;
  std::vector<double> cumulative_revenue_regret;
  std::vector<double> agent_net_utility;  // final sum of x mu - p per agent
  std::vector<double> agent_payments;     // final payment totals per agent
};

MetricsSeries compute_metrics(std::span<const RoundRecord> records, std::size_t agents,
                              MetricsOptions options = {});

}  // namespace fba
