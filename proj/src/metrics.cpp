#include "fbauction/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fbauction/error.hpp"

namespace fba {
namespace {

double best_mean(const RoundRecord& rec) {
  const auto& mu = rec.truth.true_means;
  if (mu.empty()) throw InputError("round " + std::to_string(rec.t) + " carries no true means");
  return *std::max_element(mu.begin(), mu.end());
}

double allocated_mean(const RoundRecord& rec) {
  const auto& mu = rec.truth.true_means;
  if (rec.allocated >= mu.size()) throw InputError("round " + std::to_string(rec.t) + " allocation out of range");
  return mu[rec.allocated];
}

void check_pair(const Run& truthful, const Run& deviant, AgentIndex agent) {
  if (truthful.meta.seed != deviant.meta.seed || truthful.meta.seed_index != deviant.meta.seed_index) {
    throw InputError("paired runs use different seeds");
  }
  if (truthful.records.size() != deviant.records.size()) throw InputError("paired runs have different horizons");
  auto strip = [](std::map<std::string, std::string> cfg) {
    cfg.erase("deviant.strategy");
    return cfg;
  };
  if (strip(truthful.meta.config) != strip(deviant.meta.config)) {
    throw InputError("paired runs differ in configuration beyond the deviant strategy");
  }
  if (!truthful.records.empty() && agent >= truthful.records.front().truth.true_means.size()) {
    throw InputError("deviant agent " + std::to_string(agent) + " out of range");
  }
}

double own_profit(const RoundRecord& rec, AgentIndex agent) {
  return rec.allocated == agent ? allocated_mean(rec) - rec.payment : 0.0;
}

}  // namespace

std::vector<double> prefix_sum(std::span<const double> increments) {
  std::vector<double> out(increments.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < increments.size(); ++i) {
    acc += increments[i];
    out[i] = acc;
  }
  return out;
}

std::vector<double> welfare_regret(std::span<const RoundRecord> records, MetricsOptions options) {
  std::vector<double> out;
  out.reserve(records.size());
  for (const RoundRecord& rec : records) {
    if (rec.explored && !options.count_exploration_welfare) {
      out.push_back(0.0);
    } else {
      out.push_back(best_mean(rec) - allocated_mean(rec));
    }
  }
  return out;
}

std::vector<double> revenue_regret(std::span<const RoundRecord> records) {
  std::vector<double> out;
  out.reserve(records.size());
  for (const RoundRecord& rec : records) out.push_back(rec.truth.oracle_second_price - rec.payment);
  return out;
}

std::vector<double> delta_trace(std::span<const RoundRecord> records) {
  std::vector<double> out;
  out.reserve(records.size());
  for (const RoundRecord& rec : records) {
    const auto& est = rec.probe_estimates.empty() ? rec.estimates : rec.probe_estimates;
    const auto& mu = rec.truth.true_means;
    if (est.empty()) {
      out.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    if (est.size() != mu.size()) throw InputError("round " + std::to_string(rec.t) + " estimate count mismatch");
    double worst = 0.0;
    for (std::size_t k = 0; k < mu.size(); ++k) worst = std::max(worst, std::abs(mu[k] - est[k]));
    out.push_back(worst);
  }
  return out;
}

std::vector<double> ir_ledger(std::span<const RoundRecord> records, AgentIndex agent) {
  std::vector<double> inc;
  inc.reserve(records.size());
  for (const RoundRecord& rec : records) inc.push_back(own_profit(rec, agent));
  return prefix_sum(inc);
}

std::vector<double> strategic_profit_increments(const Run& truthful, const Run& deviant, AgentIndex agent) {
  check_pair(truthful, deviant, agent);
  std::vector<double> out(truthful.records.size());
  for (std::size_t t = 0; t < out.size(); ++t) {
    out[t] = own_profit(deviant.records[t], agent) - own_profit(truthful.records[t], agent);
  }
  return out;
}

double strategic_profit(const Run& truthful, const Run& deviant, AgentIndex agent) {
  check_pair(truthful, deviant, agent);
  double dev = 0.0;
  double tru = 0.0;
  for (std::size_t t = 0; t < truthful.records.size(); ++t) {
    dev += own_profit(deviant.records[t], agent);
    tru += own_profit(truthful.records[t], agent);
  }
  return dev - tru;
}

double regret_slope(std::span<const double> cumulative, double tail_fraction) {
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) throw InputError("tail fraction must be in (0,1]");
  const std::size_t h = cumulative.size();
  const auto window = static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(h)));
  if (window < 2) throw InputError("regret slope needs at least two points in the window");
  const std::size_t start = h - window;

  double sx = 0.0, sy = 0.0;
  for (std::size_t i = start; i < h; ++i) {
    if (!(cumulative[i] > 0.0)) {
      throw InputError("non-positive cumulative value at t=" + std::to_string(i + 1));
    }
    sx += std::log(static_cast<double>(i + 1));
    sy += std::log(cumulative[i]);
  }
  const double n = static_cast<double>(window);
  const double mx = sx / n, my = sy / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = start; i < h; ++i) {
    const double dx = std::log(static_cast<double>(i + 1)) - mx;
    sxy += dx * (std::log(cumulative[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

std::vector<AgentWelfare> agent_welfare(std::span<const RoundRecord> records, std::size_t agents,
                                        MetricsOptions options) {
  std::vector<AgentWelfare> out(agents);
  const std::vector<double> regret = welfare_regret(records, options);
  for (std::size_t t = 0; t < records.size(); ++t) {
    const RoundRecord& rec = records[t];
    if (rec.allocated >= agents) throw InputError("allocation out of range at t=" + std::to_string(rec.t));
    AgentWelfare& a = out[rec.allocated];
    const double mu = allocated_mean(rec);
    ++a.allocations;
    a.welfare += mu;
    a.shortfall += 1.0 - mu;
    a.regret += regret[t];
    a.payments += rec.payment;
  }
  return out;
}

MetricsSeries compute_metrics(std::span<const RoundRecord> records, std::size_t agents, MetricsOptions options) {
  MetricsSeries m;
  m.welfare_regret_increment = welfare_regret(records, options);
  m.revenue_regret_increment = revenue_regret(records);
  m.delta = delta_trace(records);
  m.eta.reserve(records.size());
  for (const RoundRecord& rec : records) m.eta.push_back(rec.eta);
  m.cumulative_welfare_regret = prefix_sum(m.welfare_regret_increment);
  m.cumulative_revenue_regret = prefix_sum(m.revenue_regret_increment);
  m.agent_net_utility.assign(agents, 0.0);
  m.agent_payments.assign(agents, 0.0);
  for (const RoundRecord& rec : records) {
    if (rec.allocated >= agents) throw InputError("allocation out of range at t=" + std::to_string(rec.t));
    m.agent_net_utility[rec.allocated] += allocated_mean(rec) - rec.payment;
    m.agent_payments[rec.allocated] += rec.payment;
  }
  return m;
}

}  // namespace fba
