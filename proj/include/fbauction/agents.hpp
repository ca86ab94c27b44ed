#pragma once

// Simulated agents: how realized utility is drawn from a request, and how an
// agent turns that utility into a comparison report.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fbauction/core.hpp"
#include "fbauction/labels.hpp"

namespace fba {

enum class NoiseKind { bernoulli, truncated_uniform };

struct NoiseModel {
  NoiseKind kind = NoiseKind::truncated_uniform;
  double width = 0.2;  // truncated_uniform half-width cap
};

std::string_view to_string(NoiseKind kind) noexcept;
NoiseKind parse_noise_kind(std::string_view text);

enum class StrategyKind { truthful, always_high, always_low, inverted, random, threshold_shift };

/// Reporting rule. `param` is p for random(p) and delta for threshold_shift(delta).
struct Strategy {
  StrategyKind kind = StrategyKind::truthful;
  double param = 0.0;

  /// Parses "truthful", "always_high", "random(0.5)", "threshold_shift(-0.2)", ...
  static Strategy parse(std::string_view text);
  std::string to_string() const;

  friend bool operator==(const Strategy&, const Strategy&) = default;
};

struct AgentSpec {
  std::vector<double> theta;  // mu(w) = theta . w
  NoiseModel noise;
  Strategy strategy;
  std::optional<ToxicityLabel> sensitivity;  // toxicity agents only

  /// theta . w (no range check).
  double mean(const Context& w) const;
};

/// Draws u in [0,1] with E[u | w] = theta . w. Consumes exactly one uniform
/// from `stream` so paired runs stay aligned. Throws ConfigError if
/// theta . w falls outside [0,1] and InputError on a dimension mismatch.
double sample_utility(const AgentSpec& spec, const Context& w, RngStream& stream);

/// Boolean answer to comparison price c under `strategy`. Only random(p)
/// consumes randomness.
bool report(const Strategy& strategy, double u, double c, RngStream& stream);

struct ToxicityUtility {
  double raw;          // -1 if the example hits the agent's sensitivity, else 0
  double transformed;  // raw + 1, the [0,1] value the mechanism works with
};

/// Throws ConfigError if the agent has no sensitivity label.
ToxicityUtility toxicity_utility(const AgentSpec& spec, const LabelSet& labels);

/// Contexts uniform on the probability simplex (normalized exponentials).
Context sample_simplex_context(std::size_t dim, RngStream& stream);

/// Agent coefficients with entries i.i.d. Uniform[0,1].
std::vector<double> sample_theta(std::size_t dim, RngStream& stream);

}  // namespace fba
