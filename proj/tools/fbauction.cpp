// fbauction: command-line driver for feedback-auction experiments.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fbauction/config.hpp"
#include "fbauction/dataset.hpp"
#include "fbauction/error.hpp"
#include "fbauction/experiment.hpp"
#include "fbauction/metrics.hpp"
#include "fbauction/report.hpp"
#include "fbauction/run_io.hpp"

namespace fs = std::filesystem;
using namespace fba;

namespace {

struct ConfigArgs {
  std::string path;
  std::vector<std::string> overrides;
};

void add_config_args(CLI::App* cmd, ConfigArgs& args) {
  cmd->add_option("-c,--config", args.path, "Config file (key = value lines)");
  cmd->add_option("-s,--set", args.overrides, "Override a config key: key=value (repeatable)");
}

ExperimentConfig load_config(const ConfigArgs& args) {
  std::string text;
  if (!args.path.empty()) {
    std::ifstream in(args.path, std::ios::binary);
    if (!in) throw IoError("cannot open config " + args.path);
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  // Overrides are applied by appending; duplicate keys are rejected, so drop
  // any line the override replaces.
  std::map<std::string, std::string> set;
  for (const auto& o : args.overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + o + "'");
    set[o.substr(0, eq)] = o.substr(eq + 1);
  }
  std::string merged;
  std::size_t start = 0;
  while (start < text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string::npos) nl = text.size();
    std::string line = text.substr(start, nl - start);
    start = nl + 1;
    const auto eq = line.find('=');
    if (eq != std::string::npos) {
      std::string key = line.substr(0, eq);
      if (const auto hash = key.find('#'); hash == std::string::npos) {
        key.erase(0, key.find_first_not_of(" \t"));
        key.erase(key.find_last_not_of(" \t") + 1);
        if (set.count(key)) continue;
      }
    }
    merged += line + "\n";
  }
  for (const auto& [k, v] : set) merged += k + " = " + v + "\n";
  return ExperimentConfig::parse(merged);
}

fs::path run_file(const ExperimentConfig& cfg, std::uint64_t seed_index) {
  return fs::path(cfg.output_dir) /
         (std::string(to_string(cfg.mechanism)) + "_seed" + std::to_string(seed_index) + ".jsonl");
}

int cmd_run(const ConfigArgs& args, unsigned threads) {
  const ExperimentConfig cfg = load_config(args);
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec) throw IoError("cannot create output directory " + cfg.output_dir + ": " + ec.message());

  const std::vector<Run> runs = simulate_sweep(cfg, {cfg.output_contexts}, threads);
  const RunWriteOptions wopts{cfg.output_contexts, MetricsOptions{cfg.count_exploration_welfare}};
  std::vector<double> welfare, revenue;
  std::size_t ir_ok = 0, ir_total = 0;
  for (const Run& run : runs) {
    write_run(run_file(cfg, run.meta.seed_index), run, wopts);
    const MetricsSeries m = compute_metrics(run.records, cfg.agents, wopts.metrics);
    welfare.push_back(m.cumulative_welfare_regret.back());
    revenue.push_back(m.cumulative_revenue_regret.back());
    for (AgentIndex a = 0; a < cfg.agents; ++a) {
      if (cfg.deviant_agent && *cfg.deviant_agent == a) continue;
      ++ir_total;
      ir_ok += m.agent_net_utility[a] >= 0.0 ? 1 : 0;
    }
  }
  const AggregateReport rep = aggregate_runs(runs);
  const MeanStderr w = mean_stderr(welfare);
  const MeanStderr r = mean_stderr(revenue);
  std::printf("mechanism=%s seeds=%zu horizon=%llu\n", std::string(to_string(cfg.mechanism)).c_str(), runs.size(),
              static_cast<unsigned long long>(cfg.horizon));
  std::printf("final cumulative welfare regret: %.4f +- %.4f\n", w.mean, w.stderr);
  std::printf("final cumulative revenue regret: %.4f +- %.4f\n", r.mean, r.stderr);
  std::printf("tail log-log slope: welfare %.4f revenue %.4f\n", rep.mechanisms.front().welfare_slope,
              rep.mechanisms.front().revenue_slope);
  std::printf("truthful agents with nonnegative net utility: %zu/%zu\n", ir_ok, ir_total);
  std::printf("wrote %zu run files to %s\n", runs.size(), cfg.output_dir.c_str());
  return 0;
}

int cmd_paired(const ConfigArgs& args, std::size_t agent, const std::string& strategy_text, const std::string& out,
               unsigned threads) {
  const ExperimentConfig cfg = load_config(args);
  const Strategy strategy = Strategy::parse(strategy_text);
  if (agent >= cfg.agents) {
    throw ConfigError("deviant agent " + std::to_string(agent) + " out of range for " + std::to_string(cfg.agents) +
                      " agents");
  }
  const PairedDeviationReport rep = paired_deviation(cfg, agent, strategy, {false}, threads);
  std::string csv = "seed_index,profit,tail_profit_per_round,delta_sum\n";
  for (const auto& s : rep.seeds) {
    std::printf("seed %3llu  profit %12.4f  tail/round %+.6f\n", static_cast<unsigned long long>(s.seed_index),
                s.profit, s.tail_profit_per_round);
    char line[160];
    std::snprintf(line, sizeof line, "%llu,%.12g,%.12g,%.12g\n", static_cast<unsigned long long>(s.seed_index),
                  s.profit, s.tail_profit_per_round, s.delta_sum);
    csv += line;
  }
  std::printf("agent %zu strategy %s\n", agent, strategy.to_string().c_str());
  std::printf("mean strategic profit: %.4f +- %.4f (bound 6*sum delta: %.4f)\n", rep.mean_profit, rep.stderr_profit,
              rep.bound);
  std::printf("last-quartile profit per round: %+.6f +- %.6f\n", rep.mean_tail_profit, rep.stderr_tail_profit);
  if (!out.empty()) {
    std::ofstream f(out, std::ios::binary);
    if (!f) throw IoError("cannot write " + out);
    f << csv;
  }
  return 0;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path.string());
  f << text;
}

int cmd_report(const std::vector<std::string>& files, bool allow_mixed, const std::string& out_dir) {
  std::vector<Run> runs;
  for (const auto& f : files) runs.push_back(read_run(f));
  const AggregateReport rep = aggregate_runs(runs, {allow_mixed});
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir + ": " + ec.message());
  write_text(fs::path(out_dir) / "curves.csv", curves_csv(rep));
  write_text(fs::path(out_dir) / "agent_losses.csv", agent_losses_csv(rep));
  std::cout << summary_text(rep);
  std::cout << "wrote " << (fs::path(out_dir) / "curves.csv").string() << " and "
            << (fs::path(out_dir) / "agent_losses.csv").string() << "\n";
  return 0;
}

int cmd_gen_data(const std::string& out, std::size_t examples, std::size_t dim, std::uint64_t seed) {
  ToxicityProxyOptions opts;
  opts.examples = examples;
  opts.embedding_dim = dim;
  write_examples(out, generate_toxicity_proxy(opts, seed));
  std::printf("wrote %zu examples (%zu features) to %s\n", examples, dim, out.c_str());
  return 0;
}

int exit_code(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::config: return 2;
    case ErrorCategory::input: return 3;
    case ErrorCategory::numeric: return 4;
    case ErrorCategory::io: return 5;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Feedback-driven repeated auction simulator"};
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("-j,--threads", threads, "Worker threads for seed sweeps (0 = all cores)");

  ConfigArgs run_args, paired_args, validate_args;
  auto* run = app.add_subcommand("run", "Run every seed of a configuration and write one file per seed");
  add_config_args(run, run_args);

  auto* paired = app.add_subcommand("paired-deviation", "Truthful vs deviant arms under common random numbers");
  add_config_args(paired, paired_args);
  std::size_t agent = 0;
  std::string strategy, paired_out;
  paired->add_option("-a,--agent", agent, "Deviating agent index")->required();
  paired->add_option("--strategy", strategy, "Deviation, e.g. inverted, random(0.5), threshold_shift(0.2)")
      ->required();
  paired->add_option("-o,--out", paired_out, "Optional per-seed CSV");

  auto* report = app.add_subcommand("report", "Aggregate run files into plot-ready CSVs");
  std::vector<std::string> files;
  bool allow_mixed = false;
  std::string report_dir = "report";
  report->add_option("files", files, "Run files (.jsonl)")->required();
  report->add_flag("--allow-mixed", allow_mixed, "Aggregate runs from different configurations");
  report->add_option("-o,--out-dir", report_dir, "Directory for curves.csv and agent_losses.csv");

  auto* gen = app.add_subcommand("gen-data", "Write a synthetic toxicity-annotation dataset");
  std::string gen_out;
  std::size_t gen_examples = 4000, gen_dim = 64;
  std::uint64_t gen_seed = 2024;
  gen->add_option("-o,--out", gen_out, "Output CSV")->required();
  gen->add_option("-n,--examples", gen_examples, "Number of examples");
  gen->add_option("-d,--dim", gen_dim, "Embedding dimension");
  gen->add_option("--seed", gen_seed, "Generator seed");

  auto* validate = app.add_subcommand("validate-config", "Check a configuration and print every effective key");
  add_config_args(validate, validate_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(run_args, threads);
    if (*paired) return cmd_paired(paired_args, agent, strategy, paired_out, threads);
    if (*report) return cmd_report(files, allow_mixed, report_dir);
    if (*gen) return cmd_gen_data(gen_out, gen_examples, gen_dim, gen_seed);
    if (*validate) {
      std::cout << load_config(validate_args).to_text();
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error[" << to_string(e.category()) << "]: " << e.what() << "\n";
    return exit_code(e.category());
  } catch (const std::exception& e) {
    std::cerr << "error[internal]: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
