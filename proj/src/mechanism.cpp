#include "fbauction/mechanism.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fbauction/error.hpp"

namespace fba {

std::string_view to_string(ScheduleKind kind) noexcept {
  switch (kind) {
    case ScheduleKind::slow: return "slow";
    case ScheduleKind::fast: return "fast";
    case ScheduleKind::constant: return "constant";
  }
  return "unknown";
}

ScheduleKind parse_schedule_kind(std::string_view text) {
  if (text == "slow") return ScheduleKind::slow;
  if (text == "fast") return ScheduleKind::fast;
  if (text == "constant") return ScheduleKind::constant;
  throw ConfigError("unknown schedule kind '" + std::string(text) + "' (expected slow|fast|constant)");
}

std::string_view to_string(TrainingPolicy policy) noexcept {
  switch (policy) {
    case TrainingPolicy::exploration_only: return "exploration_only";
    case TrainingPolicy::all_allocations: return "all_allocations";
  }
  return "unknown";
}

TrainingPolicy parse_training_policy(std::string_view text) {
  if (text == "exploration_only") return TrainingPolicy::exploration_only;
  if (text == "all_allocations") return TrainingPolicy::all_allocations;
  throw ConfigError("unknown training policy '" + std::string(text) +
                    "' (expected exploration_only|all_allocations)");
}

double eta(const ScheduleSpec& spec, std::uint64_t t) {
  if (t == 0) throw InputError("exploration rate is defined for t >= 1");
  if (t <= spec.floor) return 1.0;
  const double tt = static_cast<double>(t);
  const double n_log_t = static_cast<double>(spec.agents) * std::log(tt);
  double rate = 0.0;
  switch (spec.kind) {
    case ScheduleKind::slow:
      rate = std::pow(tt, -1.0 / 3.0) * std::pow(n_log_t, (1.0 + 2.0 * spec.epsilon) / 3.0);
      break;
    case ScheduleKind::fast:
      rate = std::pow(tt, -0.5) * std::pow(n_log_t, (1.0 + spec.epsilon) / 2.0);
      break;
    case ScheduleKind::constant:
      rate = spec.constant_eta;
      break;
  }
  return std::clamp(rate, 0.0, 1.0);
}

SecondPriceOutcome second_price(std::span<const double> estimates) {
  if (estimates.size() < 2) throw InputError("second price needs at least two agents");
  SecondPriceOutcome out;
  for (AgentIndex i = 1; i < estimates.size(); ++i) {
    if (estimates[i] > estimates[out.winner]) out.winner = i;
  }
  bool first = true;
  for (AgentIndex i = 0; i < estimates.size(); ++i) {
    if (i == out.winner) continue;
    if (first || estimates[i] > out.price) out.price = estimates[i];
    first = false;
  }
  return out;
}

FeedbackMechanism::FeedbackMechanism(std::size_t agents, std::size_t dim, MechanismOptions options,
                                     std::uint64_t master_seed)
    : dim_(dim),
      options_(options),
      coin_(derive_stream(master_seed, "mechanism/explore_coin")),
      explore_agent_(derive_stream(master_seed, "mechanism/explore_agent")),
      price_(derive_stream(master_seed, "mechanism/comparison_price")) {
  if (agents == 0) throw InputError("mechanism needs at least one agent");
  options_.schedule.agents = agents;
  models_.assign(agents, ValueModel(dim, options.model));
  if (options.training == TrainingPolicy::all_allocations) probe_models_ = models_;
}

RoundRecord FeedbackMechanism::run_round(std::span<const Context> contexts, AgentOracle& oracle) {
  const double eta_t = eta(options_.schedule, t_ + 1);
  const Branch branch = coin_.uniform() < eta_t ? Branch::explore : Branch::exploit;
  return play(branch, eta_t, contexts, oracle);
}

RoundRecord FeedbackMechanism::run_round_forced(Branch branch, std::span<const Context> contexts,
                                                AgentOracle& oracle) {
  return play(branch, eta(options_.schedule, t_ + 1), contexts, oracle);
}

void FeedbackMechanism::train(std::vector<ValueModel>& models, AgentIndex agent, const Context& w,
                              const Report& r, double utility) {
  if (options_.target == LearningTarget::utility_report) {
    models[agent].ingest_value(w, utility);
  } else {
    models[agent].ingest(w, r);
  }
}

RoundRecord FeedbackMechanism::play(Branch branch, double eta_t, std::span<const Context> contexts,
                                    AgentOracle& oracle) {
  const std::size_t n = models_.size();
  if (contexts.size() != n) {
    throw InputError("expected " + std::to_string(n) + " contexts, got " + std::to_string(contexts.size()));
  }

  RoundRecord rec;
  rec.t = ++t_;
  rec.contexts.assign(contexts.begin(), contexts.end());
  rec.eta = eta_t;
  rec.explored = branch == Branch::explore;

  // One snapshot per round: every estimate below comes from the same fit.
  rec.estimates.resize(n);
  for (AgentIndex i = 0; i < n; ++i) {
    models_[i].refresh();
    rec.estimates[i] = models_[i].predict(contexts[i]);
  }
  if (!probe_models_.empty()) {
    rec.probe_estimates.resize(n);
    for (AgentIndex i = 0; i < n; ++i) {
      probe_models_[i].refresh();
      rec.probe_estimates[i] = probe_models_[i].predict(contexts[i]);
    }
  }

  if (rec.explored) {
    rec.allocated = explore_agent_.uniform_index(n);
    const double u = price_.uniform();
    rec.report.comparison_price = options_.prices.is_uniform() ? u : std::pow(u, options_.prices.exponent);
    rec.payment = 0.0;
  } else {
    const SecondPriceOutcome sp = second_price(rec.estimates);
    rec.allocated = sp.winner;
    rec.report.comparison_price = sp.price;
    rec.payment = sp.price;
  }

  const AgentIndex i = rec.allocated;
  rec.report.value = oracle.report(i, rec.report.comparison_price);
  const double utility =
      options_.target == LearningTarget::utility_report ? oracle.utility_report(i) : 0.0;

  if (rec.explored || options_.training == TrainingPolicy::all_allocations) {
    train(models_, i, contexts[i], rec.report, utility);
  }
  if (rec.explored && !probe_models_.empty()) {
    train(probe_models_, i, contexts[i], rec.report, utility);
  }
  return rec;
}

}  // namespace fba
