#pragma once

// Reference allocation rules that emit the same RoundRecord schema as the
// feedback mechanism: the full-information second-price auction, direct
// regression on numeric utility reports, and uniform random assignment.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

#include "fbauction/agents.hpp"
#include "fbauction/core.hpp"
#include "fbauction/mechanism.hpp"

namespace fba {

enum class MechanismId { feedback, direct_regression, uniform, oracle };

std::string_view to_string(MechanismId id) noexcept;
MechanismId parse_mechanism_id(std::string_view text);

/// Second-price auction on the true means. Simulator-privileged: it is the
/// one allocation rule allowed to see mu. `estimates` in its records are
/// the true means, so its estimation error is zero by construction.
class OracleAuction {
 public:
  explicit OracleAuction(std::size_t agents);

  RoundRecord run_round(std::span<const Context> contexts, std::span<const double> true_means,
                        AgentOracle& oracle);

 private:
  std::size_t agents_;
  std::uint64_t t_ = 0;
};

/// One oracle round from agent specs (mu = theta . w).
RoundRecord oracle_round(std::span<const AgentSpec> specs, std::span<const Context> contexts,
                         AgentOracle& oracle, std::uint64_t t = 1);

/// Free uniformly random allocation every round. Uses the same stream names
/// as the feedback mechanism's exploration branch, so under a shared seed its
/// winners and prices match the feedback mechanism's exploration draws.
class UniformAllocation {
 public:
  UniformAllocation(std::size_t agents, std::uint64_t master_seed);

  RoundRecord run_round(std::span<const Context> contexts, AgentOracle& oracle);

 private:
  std::size_t agents_;
  std::uint64_t t_ = 0;
  RngStream agent_;
  RngStream price_;
};

/// Feedback mechanism whose learner regresses on realized utility reports.
FeedbackMechanism make_direct_regression(std::size_t agents, std::size_t dim, MechanismOptions options,
                                         std::uint64_t master_seed);

}  // namespace fba
