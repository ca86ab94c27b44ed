#include "fbauction/report.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "fbauction/config.hpp"
#include "fbauction/error.hpp"
#include "fbauction/experiment.hpp"

namespace fba {
namespace {

std::map<std::string, std::string> comparable(std::map<std::string, std::string> cfg) {
  for (auto it = cfg.begin(); it != cfg.end();) {
    const std::string& k = it->first;
    if (k == "mechanism" || k.rfind("seeds.", 0) == 0 || k.rfind("output.", 0) == 0) {
      it = cfg.erase(it);
    } else {
      ++it;
    }
  }
  return cfg;
}

bool counts_exploration(const Run& run) {
  auto it = run.meta.config.find("metrics.count_exploration_welfare");
  return it == run.meta.config.end() || it->second != "false";
}

double slope_or_nan(std::span<const double> curve, double tail) {
  try {
    return regret_slope(curve, tail);
  } catch (const InputError&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

AggregateReport aggregate_runs(const std::vector<Run>& runs, ReportOptions options) {
  if (runs.empty()) throw InputError("report needs at least one run");
  const auto reference = comparable(runs.front().meta.config);
  std::map<std::string, std::vector<const Run*>> groups;
  for (const Run& r : runs) {
    if (!options.allow_mixed && comparable(r.meta.config) != reference) {
      throw InputError("runs come from different configurations (pass --allow-mixed to aggregate anyway)");
    }
    auto it = r.meta.config.find("mechanism");
    groups[it == r.meta.config.end() ? "unknown" : it->second].push_back(&r);
  }

  AggregateReport report;
  for (const auto& [name, members] : groups) {
    MechanismSummary s;
    s.mechanism = name;
    s.runs = members.size();
    std::size_t horizon = members.front()->records.size();
    for (const Run* r : members) horizon = std::min(horizon, r->records.size());
    const std::size_t agents = members.front()->records.empty() ? 0 : members.front()->records.front().truth.true_means.size();

    std::vector<std::vector<double>> welfare, revenue;
    std::vector<std::vector<AgentWelfare>> per_agent;
    for (const Run* r : members) {
      const MetricsOptions mo{counts_exploration(*r)};
      std::span<const RoundRecord> recs(r->records.data(), horizon);
      welfare.push_back(prefix_sum(welfare_regret(recs, mo)));
      revenue.push_back(prefix_sum(revenue_regret(recs)));
      per_agent.push_back(agent_welfare(recs, agents, mo));
    }

    s.curve.resize(horizon);
    std::vector<double> col(members.size());
    std::vector<double> mean_welfare(horizon), mean_revenue(horizon);
    for (std::size_t t = 0; t < horizon; ++t) {
      for (std::size_t k = 0; k < members.size(); ++k) col[k] = welfare[k][t];
      const MeanStderr w = mean_stderr(col);
      for (std::size_t k = 0; k < members.size(); ++k) col[k] = revenue[k][t];
      const MeanStderr v = mean_stderr(col);
      s.curve[t] = {w.mean, w.stderr, v.mean, v.stderr};
      mean_welfare[t] = w.mean;
      mean_revenue[t] = v.mean;
    }
    if (horizon > 0) {
      s.final_welfare_regret = s.curve.back().mean_welfare;
      s.final_welfare_stderr = s.curve.back().stderr_welfare;
    }
    s.welfare_slope = slope_or_nan(mean_welfare, options.tail_fraction);
    s.revenue_slope = slope_or_nan(mean_revenue, options.tail_fraction);

    for (AgentIndex a = 0; a < agents; ++a) {
      AgentLossRow row;
      row.agent = a;
      std::vector<double> regrets;
      for (const auto& pa : per_agent) {
        row.mean_allocations += static_cast<double>(pa[a].allocations);
        row.mean_shortfall += pa[a].shortfall;
        regrets.push_back(pa[a].regret);
      }
      row.mean_allocations /= static_cast<double>(members.size());
      row.mean_shortfall /= static_cast<double>(members.size());
      const MeanStderr m = mean_stderr(regrets);
      row.mean_regret = m.mean;
      row.stderr_regret = m.stderr;
      s.agent_losses.push_back(row);
    }
    report.mechanisms.push_back(std::move(s));
  }
  return report;
}

std::string curves_csv(const AggregateReport& report) {
  std::string out = "t,mechanism,runs,mean_cum_welfare_regret,stderr_cum_welfare_regret,"
                    "mean_cum_revenue_regret,stderr_cum_revenue_regret\n";
  for (const auto& m : report.mechanisms) {
    for (std::size_t t = 0; t < m.curve.size(); ++t) {
      const CurvePoint& p = m.curve[t];
      out += std::to_string(t + 1) + ',' + m.mechanism + ',' + std::to_string(m.runs) + ',' + num(p.mean_welfare) +
             ',' + num(p.stderr_welfare) + ',' + num(p.mean_revenue) + ',' + num(p.stderr_revenue) + '\n';
    }
  }
  return out;
}

std::string agent_losses_csv(const AggregateReport& report) {
  std::string out = "mechanism,agent,mean_allocations,mean_welfare_regret,stderr_welfare_regret,mean_shortfall\n";
  for (const auto& m : report.mechanisms) {
    for (const auto& row : m.agent_losses) {
      out += m.mechanism + ',' + std::to_string(row.agent) + ',' + num(row.mean_allocations) + ',' +
             num(row.mean_regret) + ',' + num(row.stderr_regret) + ',' + num(row.mean_shortfall) + '\n';
    }
  }
  return out;
}

std::string summary_text(const AggregateReport& report) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%-18s %5s %16s %10s %14s %14s\n", "mechanism", "runs", "welfare_regret",
                "stderr", "welfare_slope", "revenue_slope");
  out += line;
  for (const auto& m : report.mechanisms) {
    std::snprintf(line, sizeof line, "%-18s %5zu %16.4f %10.4f %14.4f %14.4f\n", m.mechanism.c_str(), m.runs,
                  m.final_welfare_regret, m.final_welfare_stderr, m.welfare_slope, m.revenue_slope);
    out += line;
  }
  return out;
}

}  // namespace fba
