#include "fbauction/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "fbauction/error.hpp"

namespace fba {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string fmt(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string fmt(bool v) { return v ? "true" : "false"; }

template <class T>
std::string fmt_int(T v) {
  return std::to_string(v);
}

std::uint64_t to_uint(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || end != v.data() + v.size()) {
    throw ConfigError(key + ": expected a nonnegative integer, got '" + v + "'");
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || end != v.data() + v.size()) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

DataSource parse_source(const std::string& v) {
  if (v == "synthetic") return DataSource::synthetic;
  if (v == "toxicity_proxy") return DataSource::toxicity_proxy;
  if (v == "csv") return DataSource::csv;
  throw ConfigError("data.source: unknown source '" + v + "' (expected synthetic|toxicity_proxy|csv)");
}

std::vector<ToxicityLabel> parse_sensitivities(const std::string& v) {
  std::vector<ToxicityLabel> out;
  if (v == "cycle" || v.empty()) return out;
  std::string_view rest = v;
  while (true) {
    const auto comma = rest.find(',');
    const std::string_view item = trim(rest.substr(0, comma));
    const auto label = parse_label(item);
    if (!label) throw ConfigError("population.sensitivities: unknown category '" + std::string(item) + "'");
    out.push_back(*label);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

std::string_view to_string(DataSource source) noexcept {
  switch (source) {
    case DataSource::synthetic: return "synthetic";
    case DataSource::toxicity_proxy: return "toxicity_proxy";
    case DataSource::csv: return "csv";
  }
  return "unknown";
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [key, value] : ExperimentConfig{}.to_map()) k.push_back(key);
    return k;
  }();
  return keys;
}

ToxicityLabel ExperimentConfig::sensitivity_of(AgentIndex agent) const {
  if (!sensitivities.empty()) return sensitivities.at(agent);
  return static_cast<ToxicityLabel>(agent % kLabelCount);
}

MechanismOptions ExperimentConfig::mechanism_options() const {
  MechanismOptions o;
  o.schedule.kind = schedule_kind;
  o.schedule.agents = agents;
  o.schedule.epsilon = epsilon;
  o.schedule.floor = schedule_floor;
  o.schedule.constant_eta = constant_eta;
  o.training = training;
  o.model.ridge = ridge;
  o.model.prior_estimate = prior;
  o.model.min_samples = effective_min_samples();
  o.prices.exponent = price_exponent;
  return o;
}

std::map<std::string, std::string> ExperimentConfig::to_map() const {
  std::map<std::string, std::string> m;
  m["horizon"] = fmt_int(horizon);
  m["agents"] = fmt_int(agents);
  m["dim"] = fmt_int(dim);
  m["mechanism"] = std::string(to_string(mechanism));
  m["schedule.kind"] = std::string(to_string(schedule_kind));
  m["schedule.epsilon"] = fmt(epsilon);
  m["schedule.floor"] = fmt_int(schedule_floor);
  m["schedule.eta"] = fmt(constant_eta);
  m["training"] = std::string(to_string(training));
  m["learner.ridge"] = fmt(ridge);
  m["learner.prior"] = fmt(prior);
  m["learner.min_samples"] = fmt_int(effective_min_samples());
  m["price.exponent"] = fmt(price_exponent);
  m["noise.kind"] = std::string(to_string(noise.kind));
  m["noise.width"] = fmt(noise.width);
  m["population.shared"] = fmt(population_shared);
  m["population.seed"] = fmt_int(population_seed);
  std::string sens;
  for (AgentIndex i = 0; i < agents; ++i) {
    if (i > 0) sens += ',';
    sens += to_string(sensitivity_of(i));
  }
  m["population.sensitivities"] = sens;
  m["deviant.agent"] = deviant_agent ? fmt_int(*deviant_agent) : "none";
  m["deviant.strategy"] = deviant_strategy.to_string();
  m["data.source"] = std::string(to_string(data_source));
  m["data.path"] = data_path;
  m["data.pca_k"] = fmt_int(pca_k);
  m["data.proxy_examples"] = fmt_int(proxy_examples);
  m["data.proxy_dim"] = fmt_int(proxy_dim);
  m["data.proxy_seed"] = fmt_int(proxy_seed);
  m["seeds.master"] = fmt_int(master_seed);
  m["seeds.count"] = fmt_int(seed_count);
  m["output.dir"] = output_dir;
  m["output.contexts"] = fmt(output_contexts);
  m["metrics.count_exploration_welfare"] = fmt(count_exploration_welfare);
  return m;
}

std::string ExperimentConfig::to_text() const {
  std::string out;
  for (const auto& [k, v] : to_map()) out += k + " = " + v + "\n";
  return out;
}

ExperimentConfig ExperimentConfig::from_map(const std::map<std::string, std::string>& kv) {
  const auto& known = config_keys();
  std::vector<std::string> unknown;
  for (const auto& [k, v] : kv) {
    if (!std::binary_search(known.begin(), known.end(), k)) unknown.push_back(k);
  }
  if (!unknown.empty()) {
    std::string list;
    for (const auto& k : unknown) list += (list.empty() ? "" : ", ") + k;
    throw ConfigError("unknown config keys: " + list);
  }

  ExperimentConfig c;
  auto get = [&](const char* key) -> const std::string* {
    auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };
  if (auto v = get("horizon")) c.horizon = to_uint("horizon", *v);
  if (auto v = get("agents")) c.agents = to_uint("agents", *v);
  if (auto v = get("dim")) c.dim = to_uint("dim", *v);
  if (auto v = get("mechanism")) c.mechanism = parse_mechanism_id(*v);
  if (auto v = get("schedule.kind")) c.schedule_kind = parse_schedule_kind(*v);
  if (auto v = get("schedule.epsilon")) c.epsilon = to_double("schedule.epsilon", *v);
  if (auto v = get("schedule.floor")) c.schedule_floor = to_uint("schedule.floor", *v);
  if (auto v = get("schedule.eta")) c.constant_eta = to_double("schedule.eta", *v);
  if (auto v = get("training")) c.training = parse_training_policy(*v);
  if (auto v = get("learner.ridge")) c.ridge = to_double("learner.ridge", *v);
  if (auto v = get("learner.prior")) c.prior = to_double("learner.prior", *v);
  if (auto v = get("learner.min_samples")) c.min_samples = to_uint("learner.min_samples", *v);
  if (auto v = get("price.exponent")) c.price_exponent = to_double("price.exponent", *v);
  if (auto v = get("noise.kind")) c.noise.kind = parse_noise_kind(*v);
  if (auto v = get("noise.width")) c.noise.width = to_double("noise.width", *v);
  if (auto v = get("population.shared")) c.population_shared = to_bool("population.shared", *v);
  if (auto v = get("population.seed")) c.population_seed = to_uint("population.seed", *v);
  if (auto v = get("population.sensitivities")) c.sensitivities = parse_sensitivities(*v);
  if (auto v = get("deviant.agent")) {
    if (*v == "none") {
      c.deviant_agent.reset();
    } else {
      c.deviant_agent = to_uint("deviant.agent", *v);
    }
  }
  if (auto v = get("deviant.strategy")) c.deviant_strategy = Strategy::parse(*v);
  if (auto v = get("data.source")) c.data_source = parse_source(*v);
  if (auto v = get("data.path")) c.data_path = *v;
  if (auto v = get("data.pca_k")) c.pca_k = to_uint("data.pca_k", *v);
  if (auto v = get("data.proxy_examples")) c.proxy_examples = to_uint("data.proxy_examples", *v);
  if (auto v = get("data.proxy_dim")) c.proxy_dim = to_uint("data.proxy_dim", *v);
  if (auto v = get("data.proxy_seed")) c.proxy_seed = to_uint("data.proxy_seed", *v);
  if (auto v = get("seeds.master")) c.master_seed = to_uint("seeds.master", *v);
  if (auto v = get("seeds.count")) c.seed_count = to_uint("seeds.count", *v);
  if (auto v = get("output.dir")) c.output_dir = *v;
  if (auto v = get("output.contexts")) c.output_contexts = to_bool("output.contexts", *v);
  if (auto v = get("metrics.count_exploration_welfare")) {
    c.count_exploration_welfare = to_bool("metrics.count_exploration_welfare", *v);
  }
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::parse(std::string_view text) {
  std::map<std::string, std::string> kv;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    std::string_view line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (kv.count(key)) throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    kv[key] = value;
  }
  return from_map(kv);
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void ExperimentConfig::validate() const {
  if (horizon < 1) throw ConfigError("horizon must be at least 1");
  if (agents < 1) throw ConfigError("agents must be at least 1");
  if (agents < 2 && mechanism != MechanismId::uniform) {
    throw ConfigError("mechanism " + std::string(to_string(mechanism)) + " needs at least 2 agents");
  }
  if (dim < 1) throw ConfigError("dim must be at least 1");
  if (!(epsilon > 0.0)) throw ConfigError("schedule.epsilon must be positive");
  if (schedule_floor < 1) throw ConfigError("schedule.floor must be a positive integer");
  if (!(constant_eta >= 0.0 && constant_eta <= 1.0)) throw ConfigError("schedule.eta must lie in [0,1]");
  if (!(ridge >= 0.0)) throw ConfigError("learner.ridge must be nonnegative");
  if (!(prior >= 0.0 && prior <= 1.0)) throw ConfigError("learner.prior must lie in [0,1]");
  if (!(price_exponent > 0.0)) throw ConfigError("price.exponent must be positive");
  if (!(noise.width >= 0.0)) throw ConfigError("noise.width must be nonnegative");
  if (!sensitivities.empty() && sensitivities.size() != agents) {
    throw ConfigError("population.sensitivities lists " + std::to_string(sensitivities.size()) +
                      " categories for " + std::to_string(agents) + " agents");
  }
  if (deviant_agent && *deviant_agent >= agents) {
    throw ConfigError("deviant.agent " + std::to_string(*deviant_agent) + " out of range for " +
                      std::to_string(agents) + " agents");
  }
  if (!deviant_agent && deviant_strategy.kind != StrategyKind::truthful) {
    throw ConfigError("deviant.strategy is set but deviant.agent is none");
  }
  if (data_source != DataSource::synthetic) {
    if (pca_k != dim) {
      throw ConfigError("dim (" + std::to_string(dim) + ") must equal data.pca_k (" + std::to_string(pca_k) +
                        ") for dataset sources");
    }
    if (data_source == DataSource::csv && data_path.empty()) throw ConfigError("data.source = csv needs data.path");
    if (data_source == DataSource::toxicity_proxy && pca_k > proxy_dim) {
      throw ConfigError("data.pca_k exceeds data.proxy_dim");
    }
  }
  if (seed_count < 1) throw ConfigError("seeds.count must be at least 1");
}

}  // namespace fba
