#pragma once

// Simulation driver: builds the agent population and request stream for a
// configuration, plays the chosen mechanism for `horizon` rounds, and attaches
// ground truth to every record. Also hosts seed sweeps and paired
// truthful-versus-deviant runs under common random numbers.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "fbauction/config.hpp"
#include "fbauction/dataset.hpp"
#include "fbauction/pca.hpp"
#include "fbauction/run.hpp"

namespace fba {

/// Dataset features after PCA and [0,1] scaling, shared read-only by runs.
struct PreparedData {
  std::vector<Context> contexts;
  std::vector<LabelSet> labels;
  PcaModel pca;
  MinMaxScaler scaler;
};

/// nullptr for the synthetic source.
std::shared_ptr<const PreparedData> prepare_data(const ExperimentConfig& config);

/// Agent specs for one run (theta drawn per run or from population.seed).
std::vector<AgentSpec> build_population(const ExperimentConfig& config, std::uint64_t run_seed);

struct SimulationOptions {
  bool keep_contexts = true;  // drop per-round contexts after the round to save memory
};

/// Plays one run of the sweep with index `seed_index`.
Run simulate(const ExperimentConfig& config, std::uint64_t seed_index,
             std::shared_ptr<const PreparedData> data = nullptr, SimulationOptions options = {});

/// Runs seeds 0..seeds.count-1, using up to `threads` workers (0 = hardware).
std::vector<Run> simulate_sweep(const ExperimentConfig& config, SimulationOptions options = {},
                                unsigned threads = 0);

struct PairedSeedResult {
  std::uint64_t seed_index = 0;
  double profit = 0.0;            // deviant minus truthful, whole horizon
  double tail_profit_per_round = 0.0;  // mean increment over the last quartile
  double delta_sum = 0.0;         // sum_t delta_hat_t in the truthful arm
};

struct PairedDeviationReport {
  AgentIndex agent = 0;
  Strategy strategy;
  std::vector<PairedSeedResult> seeds;
  double mean_profit = 0.0;
  double stderr_profit = 0.0;
  double mean_tail_profit = 0.0;
  double stderr_tail_profit = 0.0;
  double bound = 0.0;  // 6 * sum_t (cross-seed mean delta_hat_t)
};

/// Truthful and deviant arms per seed, sharing every random stream. The
/// config's own deviant settings are ignored.
PairedDeviationReport paired_deviation(const ExperimentConfig& config, AgentIndex agent, const Strategy& strategy,
                                       SimulationOptions options = {}, unsigned threads = 0);

/// Same, reusing truthful arms that were already simulated (indexed by seed).
PairedDeviationReport paired_deviation(const ExperimentConfig& config, AgentIndex agent, const Strategy& strategy,
                                       const std::vector<Run>& truthful_arms, SimulationOptions options = {},
                                       unsigned threads = 0);

/// Config for the truthful arm of a paired run.
ExperimentConfig truthful_arm_config(const ExperimentConfig& config, AgentIndex agent);

struct MeanStderr {
  double mean = 0.0;
  double stderr = 0.0;
};

MeanStderr mean_stderr(std::span<const double> values);

}  // namespace fba
