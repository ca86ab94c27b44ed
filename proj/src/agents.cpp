#include "fbauction/agents.hpp"

#include <algorithm>
#include <charconv>
#include <string>

#include "fbauction/error.hpp"
#include "fbauction/kernels.hpp"

namespace fba {
namespace {

// theta . w may leave [0,1] by a few ulps on the simplex boundary.
constexpr double kMeanSlack = 1e-12;

std::string format_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

double parse_param(std::string_view text, std::string_view whole) {
  double v = 0.0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || end != text.data() + text.size()) {
    throw ConfigError("bad strategy parameter in '" + std::string(whole) + "'");
  }
  return v;
}

}  // namespace

std::string_view to_string(NoiseKind kind) noexcept {
  return kind == NoiseKind::bernoulli ? "bernoulli" : "truncated_uniform";
}

NoiseKind parse_noise_kind(std::string_view text) {
  if (text == "bernoulli") return NoiseKind::bernoulli;
  if (text == "truncated_uniform") return NoiseKind::truncated_uniform;
  throw ConfigError("unknown noise model '" + std::string(text) + "' (expected bernoulli|truncated_uniform)");
}

Strategy Strategy::parse(std::string_view text) {
  const auto open = text.find('(');
  const std::string_view head = text.substr(0, open);
  std::optional<double> param;
  if (open != std::string_view::npos) {
    if (text.back() != ')') throw ConfigError("unterminated strategy parameter in '" + std::string(text) + "'");
    param = parse_param(text.substr(open + 1, text.size() - open - 2), text);
  }
  auto plain = [&](StrategyKind k) {
    if (param) throw ConfigError("strategy '" + std::string(head) + "' takes no parameter");
    return Strategy{k, 0.0};
  };
  if (head == "truthful") return plain(StrategyKind::truthful);
  if (head == "always_high") return plain(StrategyKind::always_high);
  if (head == "always_low") return plain(StrategyKind::always_low);
  if (head == "inverted") return plain(StrategyKind::inverted);
  if (head == "random") {
    const double p = param.value_or(0.5);
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("random(p) needs p in [0,1]");
    return Strategy{StrategyKind::random, p};
  }
  if (head == "threshold_shift") {
    if (!param) throw ConfigError("threshold_shift needs a shift, e.g. threshold_shift(0.2)");
    return Strategy{StrategyKind::threshold_shift, *param};
  }
  throw ConfigError("unknown strategy '" + std::string(text) + "'");
}

std::string Strategy::to_string() const {
  switch (kind) {
    case StrategyKind::truthful: return "truthful";
    case StrategyKind::always_high: return "always_high";
    case StrategyKind::always_low: return "always_low";
    case StrategyKind::inverted: return "inverted";
    case StrategyKind::random: return "random(" + format_double(param) + ")";
    case StrategyKind::threshold_shift: return "threshold_shift(" + format_double(param) + ")";
  }
  return "unknown";
}

double AgentSpec::mean(const Context& w) const {
  if (w.dim() != theta.size()) {
    throw InputError("context dimension " + std::to_string(w.dim()) + " does not match agent dimension " +
                     std::to_string(theta.size()));
  }
  return kernels::dot(theta, w.features());
}

double sample_utility(const AgentSpec& spec, const Context& w, RngStream& stream) {
  double mu = spec.mean(w);
  if (!(mu >= -kMeanSlack && mu <= 1.0 + kMeanSlack)) {
    throw ConfigError("agent mean " + format_double(mu) + " lies outside [0,1]");
  }
  mu = std::clamp(mu, 0.0, 1.0);
  const double draw = stream.uniform();
  switch (spec.noise.kind) {
    case NoiseKind::bernoulli:
      return draw < mu ? 1.0 : 0.0;
    case NoiseKind::truncated_uniform: {
      const double a = std::min({spec.noise.width, mu, 1.0 - mu});
      return std::clamp(mu + a * (2.0 * draw - 1.0), 0.0, 1.0);
    }
  }
  return mu;
}

bool report(const Strategy& strategy, double u, double c, RngStream& stream) {
  switch (strategy.kind) {
    case StrategyKind::truthful: return u >= c;
    case StrategyKind::always_high: return true;
    case StrategyKind::always_low: return false;
    case StrategyKind::inverted: return u < c;
    case StrategyKind::random: return stream.bernoulli(strategy.param);
    case StrategyKind::threshold_shift: return u >= c + strategy.param;
  }
  return u >= c;
}

ToxicityUtility toxicity_utility(const AgentSpec& spec, const LabelSet& labels) {
  if (!spec.sensitivity) throw ConfigError("toxicity utility needs an agent sensitivity label");
  const double raw = labels.test(static_cast<std::size_t>(*spec.sensitivity)) ? -1.0 : 0.0;
  return {raw, raw + 1.0};
}

Context sample_simplex_context(std::size_t dim, RngStream& stream) {
  std::vector<double> x(dim);
  double total = 0.0;
  for (double& v : x) {
    v = stream.exponential();
    total += v;
  }
  // total > 0 almost surely; guard the all-zero draw anyway.
  if (total <= 0.0) {
    std::fill(x.begin(), x.end(), 1.0 / static_cast<double>(dim));
  } else {
    for (double& v : x) v /= total;
  }
  return Context(std::move(x));
}

std::vector<double> sample_theta(std::size_t dim, RngStream& stream) {
  std::vector<double> theta(dim);
  for (double& v : theta) v = stream.uniform();
  return theta;
}

}  // namespace fba
