#include "fbauction/baselines.hpp"

#include <string>
#include <vector>

#include "fbauction/error.hpp"

namespace fba {

std::string_view to_string(MechanismId id) noexcept {
  switch (id) {
    case MechanismId::feedback: return "feedback";
    case MechanismId::direct_regression: return "direct_regression";
    case MechanismId::uniform: return "uniform";
    case MechanismId::oracle: return "oracle";
  }
  return "unknown";
}

MechanismId parse_mechanism_id(std::string_view text) {
  if (text == "feedback") return MechanismId::feedback;
  if (text == "direct_regression") return MechanismId::direct_regression;
  if (text == "uniform") return MechanismId::uniform;
  if (text == "oracle") return MechanismId::oracle;
  throw ConfigError("unknown mechanism '" + std::string(text) +
                    "' (expected feedback|direct_regression|uniform|oracle)");
}

OracleAuction::OracleAuction(std::size_t agents) : agents_(agents) {
  if (agents < 2) throw ConfigError("oracle second-price auction needs at least two agents");
}

RoundRecord OracleAuction::run_round(std::span<const Context> contexts, std::span<const double> true_means,
                                     AgentOracle& oracle) {
  if (contexts.size() != agents_ || true_means.size() != agents_) {
    throw InputError("oracle round expects " + std::to_string(agents_) + " contexts and means");
  }
  RoundRecord rec;
  rec.t = ++t_;
  rec.contexts.assign(contexts.begin(), contexts.end());
  rec.eta = 0.0;
  rec.explored = false;
  rec.estimates.assign(true_means.begin(), true_means.end());
  const SecondPriceOutcome sp = second_price(true_means);
  rec.allocated = sp.winner;
  rec.payment = sp.price;
  rec.report.comparison_price = sp.price;
  rec.report.value = oracle.report(sp.winner, sp.price);
  return rec;
}

RoundRecord oracle_round(std::span<const AgentSpec> specs, std::span<const Context> contexts,
                         AgentOracle& oracle, std::uint64_t t) {
  if (specs.size() != contexts.size()) throw InputError("oracle round: one context per agent required");
  std::vector<double> mu;
  mu.reserve(specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i) mu.push_back(specs[i].mean(contexts[i]));
  OracleAuction auction(specs.size());
  RoundRecord rec = auction.run_round(contexts, mu, oracle);
  rec.t = t;
  rec.truth.true_means = mu;
  rec.truth.oracle_second_price = rec.payment;
  return rec;
}

UniformAllocation::UniformAllocation(std::size_t agents, std::uint64_t master_seed)
    : agents_(agents),
      agent_(derive_stream(master_seed, "mechanism/explore_agent")),
      price_(derive_stream(master_seed, "mechanism/comparison_price")) {
  if (agents == 0) throw ConfigError("uniform allocation needs at least one agent");
}

RoundRecord UniformAllocation::run_round(std::span<const Context> contexts, AgentOracle& oracle) {
  if (contexts.size() != agents_) throw InputError("uniform round expects " + std::to_string(agents_) + " contexts");
  RoundRecord rec;
  rec.t = ++t_;
  rec.contexts.assign(contexts.begin(), contexts.end());
  rec.eta = 1.0;
  rec.explored = true;
  rec.allocated = agents_ == 1 ? 0 : agent_.uniform_index(agents_);
  rec.report.comparison_price = price_.uniform();
  rec.payment = 0.0;
  rec.report.value = oracle.report(rec.allocated, rec.report.comparison_price);
  return rec;
}

FeedbackMechanism make_direct_regression(std::size_t agents, std::size_t dim, MechanismOptions options,
                                         std::uint64_t master_seed) {
  options.target = LearningTarget::utility_report;
  return FeedbackMechanism(agents, dim, options, master_seed);
}

}  // namespace fba
