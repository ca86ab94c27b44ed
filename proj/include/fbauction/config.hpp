#pragma once

// Experiment configuration: flat `key = value` text with dotted keys and '#'
// comments. Every key has a default; unknown keys are rejected.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fbauction/agents.hpp"
#include "fbauction/baselines.hpp"
#include "fbauction/labels.hpp"
#include "fbauction/learner.hpp"
#include "fbauction/mechanism.hpp"

namespace fba {

enum class DataSource { synthetic, toxicity_proxy, csv };

std::string_view to_string(DataSource source) noexcept;

struct ExperimentConfig {
  std::uint64_t horizon = 5000;
  std::size_t agents = 10;
  std::size_t dim = 30;
  MechanismId mechanism = MechanismId::feedback;

  ScheduleKind schedule_kind = ScheduleKind::slow;
  double epsilon = 0.05;
  std::uint64_t schedule_floor = 3;
  double constant_eta = 0.1;
  TrainingPolicy training = TrainingPolicy::exploration_only;

  double ridge = 1e-6;
  double prior = 0.5;
  std::size_t min_samples = 0;  // 0 = dim
  double price_exponent = 1.0;

  NoiseModel noise;
  bool population_shared = false;     // same theta for every seed of a sweep
  std::uint64_t population_seed = 1;  // used when population_shared
  std::vector<ToxicityLabel> sensitivities;  // empty = cycle through the categories

  std::optional<AgentIndex> deviant_agent;
  Strategy deviant_strategy;

  DataSource data_source = DataSource::synthetic;
  std::string data_path;
  std::size_t pca_k = 30;
  std::size_t proxy_examples = 4000;
  std::size_t proxy_dim = 64;
  std::uint64_t proxy_seed = 2024;

  std::uint64_t master_seed = 42;
  std::size_t seed_count = 20;

  std::string output_dir = "runs";
  bool output_contexts = true;
  bool count_exploration_welfare = true;

  /// Parses config text; throws ConfigError naming the line or listing unknown keys.
  static ExperimentConfig parse(std::string_view text);
  static ExperimentConfig from_map(const std::map<std::string, std::string>& kv);
  static ExperimentConfig load(const std::string& path);

  /// Every effective parameter, defaults resolved (min_samples, sensitivities).
  std::map<std::string, std::string> to_map() const;
  std::string to_text() const;

  /// Throws ConfigError on an inconsistent configuration.
  void validate() const;

  std::size_t effective_min_samples() const noexcept { return min_samples == 0 ? dim : min_samples; }
  ToxicityLabel sensitivity_of(AgentIndex agent) const;
  MechanismOptions mechanism_options() const;
};

/// All recognised configuration keys, sorted.
const std::vector<std::string>& config_keys();

}  // namespace fba
