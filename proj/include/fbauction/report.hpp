#pragma once

// Cross-seed aggregation of run files into plot-ready tables.

#include <map>
#include <string>
#include <vector>

#include "fbauction/metrics.hpp"
#include "fbauction/run.hpp"

namespace fba {

struct CurvePoint {
  double mean_welfare = 0.0;
  double stderr_welfare = 0.0;
  double mean_revenue = 0.0;
  double stderr_revenue = 0.0;
};

struct AgentLossRow {
  AgentIndex agent = 0;
  double mean_allocations = 0.0;
  double mean_regret = 0.0;     // welfare regret attributed to the agent's allocations
  double stderr_regret = 0.0;
  double mean_shortfall = 0.0;  // sum of (1 - mu); realized harm for toxicity agents
};

struct MechanismSummary {
  std::string mechanism;
  std::size_t runs = 0;
  std::vector<CurvePoint> curve;          // index t-1
  std::vector<AgentLossRow> agent_losses;
  double welfare_slope = 0.0;             // NaN when the mean curve is not positive in the tail
  double revenue_slope = 0.0;
  double final_welfare_regret = 0.0;
  double final_welfare_stderr = 0.0;
};

struct AggregateReport {
  std::vector<MechanismSummary> mechanisms;  // sorted by mechanism name
};

struct ReportOptions {
  bool allow_mixed = false;
  double tail_fraction = 0.5;
};

/// Groups runs by mechanism. Runs must agree on every config key except
/// mechanism, seeds.* and output.* unless allow_mixed; a mismatch throws InputError.
AggregateReport aggregate_runs(const std::vector<Run>& runs, ReportOptions options = {});

/// t, mechanism, runs, mean/stderr cumulative welfare and revenue regret.
std::string curves_csv(const AggregateReport& report);
/// mechanism, agent, mean allocations, mean/stderr attributed regret, mean shortfall.
std::string agent_losses_csv(const AggregateReport& report);
/// Human-readable summary table.
std::string summary_text(const AggregateReport& report);

}  // namespace fba
