#pragma once

// Epsilon-greedy feedback-driven auction.
//
// Each round the mechanism either explores (probability eta_t: a uniformly
// random agent gets the good for free and is asked about a uniform comparison
// price) or exploits (the highest estimate wins and pays the highest competing
// estimate, which also serves as the comparison price). Reports from exploration
// rounds train the per-agent value models.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "fbauction/core.hpp"
#include "fbauction/learner.hpp"

namespace fba {

enum class ScheduleKind { slow, fast, constant };

std::string_view to_string(ScheduleKind kind) noexcept;
ScheduleKind parse_schedule_kind(std::string_view text);

struct ScheduleSpec {
  ScheduleKind kind = ScheduleKind::slow;
  std::size_t agents = 2;
  double epsilon = 0.05;
  std::uint64_t floor = 3;     // eta_t = 1 for t <= floor
  double constant_eta = 0.1;   // used by ScheduleKind::constant
};

/// Exploration probability at round t >= 1:
///   slow:     min(1, t^(-1/3) (n ln t)^((1+2 eps)/3))
///   fast:     min(1, t^(-1/2) (n ln t)^((1+eps)/2))
///   constant: the fixed rate
/// and 1 for t <= floor. Throws InputError for t = 0.
double eta(const ScheduleSpec& spec, std::uint64_t t);

/// Which rounds feed the value models.
enum class TrainingPolicy { exploration_only, all_allocations };

std::string_view to_string(TrainingPolicy policy) noexcept;
TrainingPolicy parse_training_policy(std::string_view text);

/// What the learner regresses on.
enum class LearningTarget {
  comparison_report,  // boolean r = 1{u >= c}
  utility_report,     // realized utility (direct-regression baseline)
};

/// Comparison prices on exploration rounds are U^exponent with U ~ Uniform[0,1);
/// exponent 1 is the uniform draw the identification argument needs.
struct PriceDistribution {
  double exponent = 1.0;
  bool is_uniform() const noexcept { return exponent == 1.0; }
};

struct MechanismOptions {
  ScheduleSpec schedule;
  TrainingPolicy training = TrainingPolicy::exploration_only;
  LearningTarget target = LearningTarget::comparison_report;
  ValueModelOptions model;
  PriceDistribution prices;
};

/// The only window a mechanism has onto the agents. Implementations answer
/// queries about the most recent allocation; they never expose true means.
class AgentOracle {
 public:
  virtual ~AgentOracle() = default;
  /// Agent's boolean answer for comparison price c.
  virtual bool report(AgentIndex agent, double comparison_price) = 0;
  /// Agent's numeric utility report (direct-regression baseline only).
  virtual double utility_report(AgentIndex agent) = 0;
};

struct SecondPriceOutcome {
  AgentIndex winner = 0;
  double price = 0.0;
};

/// Highest entry wins (lowest index on ties) and pays the highest other entry.
/// Throws InputError for fewer than two entries.
SecondPriceOutcome second_price(std::span<const double> estimates);

enum class Branch { explore, exploit };

class FeedbackMechanism {
 public:
  FeedbackMechanism(std::size_t agents, std::size_t dim, MechanismOptions options,
                    std::uint64_t master_seed);

  std::size_t agents() const noexcept { return models_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  std::uint64_t round() const noexcept { return t_; }
  const MechanismOptions& options() const noexcept { return options_; }
  const std::vector<ValueModel>& models() const noexcept { return models_; }

  /// Plays one round. The returned record has no simulator truth attached.
  RoundRecord run_round(std::span<const Context> contexts, AgentOracle& oracle);

  /// Plays one round with the branch fixed instead of drawn (the coin is not
  /// consumed). Intended for tests and diagnostics.
  RoundRecord run_round_forced(Branch branch, std::span<const Context> contexts, AgentOracle& oracle);

 private:
  RoundRecord play(Branch branch, double eta_t, std::span<const Context> contexts, AgentOracle& oracle);
  void train(std::vector<ValueModel>& models, AgentIndex agent, const Context& w, const Report& r,
             double utility);

  std::size_t dim_;
  MechanismOptions options_;
  std::vector<ValueModel> models_;
  // Exploration-only shadow models, kept when training uses all allocations so
  // the estimation-error trace still refers to exploration-trained models.
  std::vector<ValueModel> probe_models_;
  std::uint64_t t_ = 0;
  RngStream coin_;
  RngStream explore_agent_;
  RngStream price_;
};

}  // namespace fba
