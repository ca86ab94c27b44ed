#include "fbauction/run_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "fbauction/error.hpp"

namespace fba {
namespace {

using nlohmann::ordered_json;

ordered_json metadata_json(const RunMetadata& m, std::size_t rounds) {
  ordered_json j;
  j["kind"] = "run_metadata";
  j["code_version"] = m.code_version;
  j["seed_index"] = m.seed_index;
  j["seed"] = m.seed;
  j["rounds"] = rounds;
  j["kernels"] = m.kernels;
  j["identification_valid"] = m.identification_valid;
  j["error_bars"] = "standard error of the mean across seeds";
  ordered_json cfg = ordered_json::object();
  for (const auto& [k, v] : m.config) cfg[k] = v;
  j["config"] = cfg;
  j["population"] = m.population;
  j["feature_min"] = m.feature_min;
  j["feature_max"] = m.feature_max;
  return j;
}

template <class T>
T field(const ordered_json& j, const char* key, std::size_t line) {
  auto it = j.find(key);
  if (it == j.end()) throw InputError("run file line " + std::to_string(line) + ": missing field '" + key + "'");
  return it->get<T>();
}

}  // namespace

std::string format_run(const Run& run, RunWriteOptions options) {
  const std::size_t agents = run.records.empty() ? 0 : run.records.front().truth.true_means.size();
  const MetricsSeries metrics = compute_metrics(run.records, agents, options.metrics);

  std::string out = metadata_json(run.meta, run.records.size()).dump();
  out += '\n';
  for (std::size_t i = 0; i < run.records.size(); ++i) {
    const RoundRecord& r = run.records[i];
    ordered_json j;
    j["t"] = r.t;
    j["alloc"] = r.allocated;
    j["explored"] = r.explored;
    j["c"] = r.report.comparison_price;
    j["r"] = r.report.value;
    j["p"] = r.payment;
    j["eta"] = r.eta;
    j["est"] = r.estimates;
    if (!r.probe_estimates.empty()) j["probe"] = r.probe_estimates;
    if (options.contexts) {
      ordered_json w = ordered_json::array();
      for (const Context& ctx : r.contexts) {
        w.push_back(std::vector<double>(ctx.features().begin(), ctx.features().end()));
      }
      j["w"] = std::move(w);
    }
    j["u"] = r.truth.true_utility;
    j["gamma"] = r.truth.oracle_second_price;
    j["mu"] = r.truth.true_means;
    j["welfare_inc"] = metrics.welfare_regret_increment[i];
    j["revenue_inc"] = metrics.revenue_regret_increment[i];
    j["delta"] = metrics.delta[i];  // NaN serializes as null
    j["cum_welfare"] = metrics.cumulative_welfare_regret[i];
    j["cum_revenue"] = metrics.cumulative_revenue_regret[i];
    out += j.dump();
    out += '\n';
  }
  return out;
}

void write_run(const std::filesystem::path& path, const Run& run, RunWriteOptions options) {
  const std::string text = format_run(run, options);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open run file " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("failed writing run file " + path.string());
}

Run parse_run(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  Run run;
  bool have_meta = false;
  try {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      const ordered_json j = ordered_json::parse(line);
      if (!have_meta) {
        if (j.value("kind", "") != "run_metadata") throw InputError("run file line 1 is not a metadata record");
        RunMetadata& m = run.meta;
        m.code_version = field<std::string>(j, "code_version", line_no);
        m.seed_index = field<std::uint64_t>(j, "seed_index", line_no);
        m.seed = field<std::uint64_t>(j, "seed", line_no);
        m.kernels = field<std::string>(j, "kernels", line_no);
        m.identification_valid = field<bool>(j, "identification_valid", line_no);
        for (const auto& [k, v] : j.at("config").items()) m.config[k] = v.get<std::string>();
        m.population = field<std::vector<std::vector<double>>>(j, "population", line_no);
        m.feature_min = field<std::vector<double>>(j, "feature_min", line_no);
        m.feature_max = field<std::vector<double>>(j, "feature_max", line_no);
        have_meta = true;
        continue;
      }
      RoundRecord r;
      r.t = field<std::uint64_t>(j, "t", line_no);
      r.allocated = field<std::size_t>(j, "alloc", line_no);
      r.explored = field<bool>(j, "explored", line_no);
      r.report.comparison_price = field<double>(j, "c", line_no);
      r.report.value = field<bool>(j, "r", line_no);
      r.payment = field<double>(j, "p", line_no);
      r.eta = field<double>(j, "eta", line_no);
      r.estimates = field<std::vector<double>>(j, "est", line_no);
      if (auto it = j.find("probe"); it != j.end()) r.probe_estimates = it->get<std::vector<double>>();
      if (auto it = j.find("w"); it != j.end()) {
        for (const auto& row : *it) r.contexts.emplace_back(row.get<std::vector<double>>());
      }
      r.truth.true_utility = field<double>(j, "u", line_no);
      r.truth.oracle_second_price = field<double>(j, "gamma", line_no);
      r.truth.true_means = field<std::vector<double>>(j, "mu", line_no);
      run.records.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError("run file line " + std::to_string(line_no) + ": " + e.what());
  }
  if (!have_meta) throw InputError("run file is empty");
  return run;
}

Run read_run(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open run file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_run(buf.str());
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

}  // namespace fba
