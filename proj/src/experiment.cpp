#include "fbauction/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <variant>

#include "fbauction/agents.hpp"
#include "fbauction/baselines.hpp"
#include "fbauction/error.hpp"
#include "fbauction/kernels.hpp"
#include "fbauction/mechanism.hpp"
#include "fbauction/metrics.hpp"

namespace fba {
namespace {

// Answers report queries from utilities drawn before the mechanism moves.
class SimulatedAgents final : public AgentOracle {
 public:
  SimulatedAgents(const std::vector<AgentSpec>& specs, std::vector<RngStream>& strategy_streams)
      : specs_(specs), streams_(strategy_streams), utilities_(specs.size(), 0.0) {}

  std::vector<double>& utilities() { return utilities_; }

  bool report(AgentIndex agent, double c) override {
    return fba::report(specs_[agent].strategy, utilities_[agent], c, streams_[agent]);
  }
  double utility_report(AgentIndex agent) override { return utilities_[agent]; }

 private:
  const std::vector<AgentSpec>& specs_;
  std::vector<RngStream>& streams_;
  std::vector<double> utilities_;
};

using Allocator = std::variant<FeedbackMechanism, UniformAllocation, OracleAuction>;

Allocator make_allocator(const ExperimentConfig& config, std::uint64_t run_seed) {
  const MechanismOptions opts = config.mechanism_options();
  switch (config.mechanism) {
    case MechanismId::feedback:
      return FeedbackMechanism(config.agents, config.dim, opts, run_seed);
    case MechanismId::direct_regression:
      return make_direct_regression(config.agents, config.dim, opts, run_seed);
    case MechanismId::uniform:
      return UniformAllocation(config.agents, run_seed);
    case MechanismId::oracle:
      return OracleAuction(config.agents);
  }
  throw ConfigError("unknown mechanism");
}

std::vector<RngStream> per_agent_streams(std::uint64_t seed, const char* prefix, std::size_t n) {
  std::vector<RngStream> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(derive_stream(seed, std::string(prefix) + std::to_string(i)));
  return out;
}

template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

MeanStderr mean_stderr(std::span<const double> values) {
  MeanStderr out;
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  const double n = static_cast<double>(values.size());
  out.mean = sum / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.stderr = std::sqrt(ss / (n - 1.0) / n);
  }
  return out;
}

std::shared_ptr<const PreparedData> prepare_data(const ExperimentConfig& config) {
  if (config.data_source == DataSource::synthetic) return nullptr;

  std::vector<LabeledExample> examples;
  if (config.data_source == DataSource::csv) {
    examples = load_examples(config.data_path);
  } else {
    ToxicityProxyOptions opts;
    opts.examples = config.proxy_examples;
    opts.embedding_dim = config.proxy_dim;
    examples = generate_toxicity_proxy(opts, config.proxy_seed);
  }
  if (examples.size() < 2) throw InputError("dataset needs at least two examples");
  const std::size_t raw_dim = examples.front().features.size();
  if (config.pca_k > std::min(examples.size(), raw_dim)) {
    throw ConfigError("data.pca_k=" + std::to_string(config.pca_k) + " exceeds the dataset's rank bound");
  }

  std::vector<double> matrix;
  matrix.reserve(examples.size() * raw_dim);
  for (const auto& ex : examples) matrix.insert(matrix.end(), ex.features.begin(), ex.features.end());

  auto data = std::make_shared<PreparedData>();
  data->pca = pca_fit(matrix, examples.size(), raw_dim, config.pca_k);
  std::vector<std::vector<double>> projected;
  projected.reserve(examples.size());
  for (const auto& ex : examples) projected.push_back(pca_transform(data->pca, ex.features));
  data->scaler = MinMaxScaler::fit(projected);
  data->contexts.reserve(examples.size());
  data->labels.reserve(examples.size());
  for (std::size_t n = 0; n < examples.size(); ++n) {
    data->contexts.emplace_back(data->scaler.apply(projected[n]));
    data->labels.push_back(examples[n].labels);
  }
  return data;
}

std::vector<AgentSpec> build_population(const ExperimentConfig& config, std::uint64_t run_seed) {
  std::vector<AgentSpec> specs(config.agents);
  const std::uint64_t theta_seed = config.population_shared ? config.population_seed : run_seed;
  RngStream theta_stream = derive_stream(theta_seed, "population/theta");
  for (AgentIndex i = 0; i < config.agents; ++i) {
    AgentSpec& s = specs[i];
    s.noise = config.noise;
    if (config.data_source == DataSource::synthetic) {
      s.theta = sample_theta(config.dim, theta_stream);
    } else {
      s.sensitivity = config.sensitivity_of(i);
    }
    if (config.deviant_agent && *config.deviant_agent == i) s.strategy = config.deviant_strategy;
  }
  return specs;
}

Run simulate(const ExperimentConfig& config, std::uint64_t seed_index, std::shared_ptr<const PreparedData> data,
             SimulationOptions options) {
  config.validate();
  if (config.data_source != DataSource::synthetic && !data) data = prepare_data(config);

  const std::uint64_t run_seed = sweep_seed(config.master_seed, seed_index);
  const std::size_t n = config.agents;
  const std::vector<AgentSpec> specs = build_population(config, run_seed);

  Run run;
  run.meta.config = config.to_map();
  run.meta.seed_index = seed_index;
  run.meta.seed = run_seed;
  run.meta.kernels = std::string(kernels::to_string(kernels::active().isa));
  run.meta.identification_valid = config.price_exponent == 1.0;
  if (config.data_source == DataSource::synthetic) {
    for (const auto& s : specs) run.meta.population.push_back(s.theta);
  } else {
    run.meta.feature_min = data->scaler.min;
    run.meta.feature_max = data->scaler.max;
  }

  std::vector<RngStream> context_streams = per_agent_streams(run_seed, "contexts/", n);
  std::vector<RngStream> utility_streams = per_agent_streams(run_seed, "utility/", n);
  std::vector<RngStream> strategy_streams = per_agent_streams(run_seed, "strategy/", n);
  SimulatedAgents agents(specs, strategy_streams);
  Allocator allocator = make_allocator(config, run_seed);

  std::vector<Context> contexts(n);
  std::vector<double> means(n);
  run.records.reserve(config.horizon);

  for (std::uint64_t t = 1; t <= config.horizon; ++t) {
    // Every agent draws a request and a potential utility each round, whether
    // or not it is allocated, so streams stay aligned across paired runs.
    for (AgentIndex i = 0; i < n; ++i) {
      if (data) {
        const std::size_t pick = context_streams[i].uniform_index(data->contexts.size());
        contexts[i] = data->contexts[pick];
        const ToxicityUtility tu = toxicity_utility(specs[i], data->labels[pick]);
        means[i] = tu.transformed;
        agents.utilities()[i] = tu.transformed;
      } else {
        contexts[i] = sample_simplex_context(config.dim, context_streams[i]);
        means[i] = std::clamp(specs[i].mean(contexts[i]), 0.0, 1.0);
        agents.utilities()[i] = sample_utility(specs[i], contexts[i], utility_streams[i]);
      }
    }

    RoundRecord rec = std::visit(
        [&](auto& mech) -> RoundRecord {
          using T = std::decay_t<decltype(mech)>;
          if constexpr (std::is_same_v<T, OracleAuction>) {
            return mech.run_round(contexts, means, agents);
          } else {
            return mech.run_round(contexts, agents);
          }
        },
        allocator);

    rec.truth.true_utility = agents.utilities()[rec.allocated];
    rec.truth.true_means = means;
    rec.truth.oracle_second_price = n >= 2 ? second_price(means).price : 0.0;
    if (!options.keep_contexts) rec.contexts.clear();
    run.records.push_back(std::move(rec));
  }
  return run;
}

std::vector<Run> simulate_sweep(const ExperimentConfig& config, SimulationOptions options, unsigned threads) {
  config.validate();
  const auto data = prepare_data(config);
  std::vector<Run> runs(config.seed_count);
  parallel_for(config.seed_count, threads, [&](std::size_t k) { runs[k] = simulate(config, k, data, options); });
  return runs;
}

ExperimentConfig truthful_arm_config(const ExperimentConfig& config, AgentIndex agent) {
  ExperimentConfig c = config;
  c.deviant_agent = agent;
  c.deviant_strategy = Strategy{};
  return c;
}

PairedDeviationReport paired_deviation(const ExperimentConfig& config, AgentIndex agent, const Strategy& strategy,
                                       SimulationOptions options, unsigned threads) {
  const ExperimentConfig truthful = truthful_arm_config(config, agent);
  truthful.validate();
  const std::vector<Run> arms = simulate_sweep(truthful, options, threads);
  return paired_deviation(config, agent, strategy, arms, options, threads);
}

PairedDeviationReport paired_deviation(const ExperimentConfig& config, AgentIndex agent, const Strategy& strategy,
                                       const std::vector<Run>& truthful_arms, SimulationOptions options,
                                       unsigned threads) {
  if (agent >= config.agents) {
    throw ConfigError("deviant agent " + std::to_string(agent) + " out of range for " +
                      std::to_string(config.agents) + " agents");
  }
  ExperimentConfig deviant = truthful_arm_config(config, agent);
  deviant.deviant_strategy = strategy;
  deviant.validate();
  if (truthful_arms.size() != config.seed_count) throw InputError("one truthful arm per seed required");

  const auto data = prepare_data(config);
  PairedDeviationReport report;
  report.agent = agent;
  report.strategy = strategy;
  report.seeds.resize(config.seed_count);

  std::vector<std::vector<double>> deltas(config.seed_count);
  parallel_for(config.seed_count, threads, [&](std::size_t k) {
    const Run& tru = truthful_arms[k];
    const Run dev = strategy == Strategy{} ? tru : simulate(deviant, k, data, options);
    const std::vector<double> inc = strategic_profit_increments(tru, dev, agent);
    PairedSeedResult& r = report.seeds[k];
    r.seed_index = k;
    r.profit = strategic_profit(tru, dev, agent);
    const std::size_t tail_start = inc.size() - inc.size() / 4;
    double tail = 0.0;
    for (std::size_t t = tail_start; t < inc.size(); ++t) tail += inc[t];
    r.tail_profit_per_round = inc.size() / 4 > 0 ? tail / static_cast<double>(inc.size() - tail_start) : 0.0;
    deltas[k] = delta_trace(tru.records);
    double dsum = 0.0;
    for (double d : deltas[k]) dsum += std::isnan(d) ? 0.0 : d;
    r.delta_sum = dsum;
  });

  std::vector<double> profits, tails;
  for (const auto& r : report.seeds) {
    profits.push_back(r.profit);
    tails.push_back(r.tail_profit_per_round);
  }
  const MeanStderr p = mean_stderr(profits);
  const MeanStderr q = mean_stderr(tails);
  report.mean_profit = p.mean;
  report.stderr_profit = p.stderr;
  report.mean_tail_profit = q.mean;
  report.stderr_tail_profit = q.stderr;
  // sum_t of the cross-seed mean equals the mean of the per-seed sums.
  double total = 0.0;
  for (const auto& r : report.seeds) total += r.delta_sum;
  report.bound = 6.0 * total / static_cast<double>(report.seeds.size());
  return report;
}

}  // namespace fba
