#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "fbauction/agents.hpp"
#include "fbauction/config.hpp"
#include "fbauction/core.hpp"
#include "fbauction/experiment.hpp"
#include "fbauction/mechanism.hpp"

namespace testing {

/// Answers report queries from fixed per-agent utilities, truthfully.
class FixedUtilityOracle final : public fba::AgentOracle {
 public:
  explicit FixedUtilityOracle(std::vector<double> u) : u_(std::move(u)) {}
  bool report(fba::AgentIndex agent, double c) override { return u_.at(agent) >= c; }
  double utility_report(fba::AgentIndex agent) override { return u_.at(agent); }

 private:
  std::vector<double> u_;
};

/// Synthetic population drawing fresh utilities per query.
class LinearAgentsOracle final : public fba::AgentOracle {
 public:
  LinearAgentsOracle(std::vector<fba::AgentSpec> specs, std::uint64_t seed)
      : specs_(std::move(specs)), utility_(fba::derive_stream(seed, "test/utility")),
        strategy_(fba::derive_stream(seed, "test/strategy")) {}

  void set_contexts(std::span<const fba::Context> contexts) { contexts_.assign(contexts.begin(), contexts.end()); }

  bool report(fba::AgentIndex agent, double c) override {
    last_u_ = fba::sample_utility(specs_[agent], contexts_[agent], utility_);
    return fba::report(specs_[agent].strategy, last_u_, c, strategy_);
  }
  double utility_report(fba::AgentIndex) override { return last_u_; }

 private:
  std::vector<fba::AgentSpec> specs_;
  std::vector<fba::Context> contexts_;
  fba::RngStream utility_;
  fba::RngStream strategy_;
  double last_u_ = 0.0;
};

inline std::vector<fba::Context> unit_contexts(std::size_t agents) {
  return std::vector<fba::Context>(agents, fba::Context({1.0}));
}

/// n = 10, d = 5, truncated_uniform(0.2), slow schedule.
inline fba::ExperimentConfig default_synthetic(std::uint64_t horizon) {
  fba::ExperimentConfig cfg;
  cfg.horizon = horizon;
  cfg.dim = 5;
  return cfg;
}

/// Truthful feedback-mechanism sweep at H = 20000 on the default synthetic
/// setting, computed once per test binary.
const std::vector<fba::Run>& default_sweep_20000();

/// Mean over runs of f(run)[t-1] for each t.
inline std::vector<double> cross_seed_mean(const std::vector<fba::Run>& runs,
                                           const std::function<std::vector<double>(const fba::Run&)>& f) {
  std::vector<double> acc;
  for (const auto& r : runs) {
    const auto v = f(r);
    if (acc.empty()) acc.assign(v.size(), 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) acc[i] += v[i];
  }
  for (double& a : acc) a /= static_cast<double>(runs.size());
  return acc;
}

}  // namespace testing
