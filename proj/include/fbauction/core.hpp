#pragma once

// Shared vocabulary: contexts, reports, per-round ledger entries and the
// seeded stream contract every random draw in the library goes through.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fba {

using AgentIndex = std::size_t;

/// Feature vector describing one agent's request in one round.
class Context {
 public:
  Context() = default;
  explicit Context(std::vector<double> features) : features_(std::move(features)) {}

  std::size_t dim() const noexcept { return features_.size(); }
  std::span<const double> features() const noexcept { return features_; }
  double operator[](std::size_t i) const { return features_[i]; }

  friend bool operator==(const Context&, const Context&) = default;

 private:
  std::vector<double> features_;
};

/// Boolean answer to "was your realized utility at least `comparison_price`?".
struct Report {
  bool value = false;
  double comparison_price = 0.0;

  friend bool operator==(const Report&, const Report&) = default;
};

/// Ground truth the simulator attaches to a round after the mechanism has
/// decided it. Mechanisms never receive or fill these fields.
struct SimulatorTruth {
  double true_utility = 0.0;          // realized u of the allocated agent
  double oracle_second_price = 0.0;   // second-highest true mean this round
  std::vector<double> true_means;     // mu_i(w_it) per agent

  friend bool operator==(const SimulatorTruth&, const SimulatorTruth&) = default;
};

struct RoundRecord {
  std::uint64_t t = 0;                // 1-based round number
  std::vector<Context> contexts;      // one per agent; may be dropped on output
  AgentIndex allocated = 0;
  bool explored = false;
  Report report;                      // report.comparison_price is c_it
  double payment = 0.0;
  double eta = 0.0;                   // exploration probability used this round
  std::vector<double> estimates;      // value estimates the allocation used; empty if none
  std::vector<double> probe_estimates;  // exploration-only estimates when they differ from `estimates`
  SimulatorTruth truth;

  double comparison_price() const noexcept { return report.comparison_price; }

  friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

// ---------------------------------------------------------------------------
// Seed mixing.
//
// splitmix64 is the finalizer from Steele, Lea & Flood (2014). Stream seeds are
//   splitmix64(splitmix64(master) ^ fnv1a64(name))
// and per-seed sweep masters are
//   splitmix64(master + 0x9E3779B97F4A7C15 * (index + 1)).
// The generator behind a stream is std::mt19937_64, whose output sequence is
// fixed by the standard, and all conversions to doubles/indices below are
// done by hand, so sequences are identical on every conforming platform.

std::uint64_t splitmix64(std::uint64_t x) noexcept;
std::uint64_t fnv1a64(std::string_view bytes) noexcept;
std::uint64_t sweep_seed(std::uint64_t master, std::uint64_t index) noexcept;

class RngStream {
 public:
  RngStream(std::string name, std::uint64_t seed) : name_(std::move(name)), seed_(seed), engine_(seed) {}

  const std::string& name() const noexcept { return name_; }
  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on {0, ..., n-1}; n must be > 0.
  std::uint64_t uniform_index(std::uint64_t n);

  bool bernoulli(double p) { return uniform() < p; }

  /// Standard exponential.
  double exponential();

 private:
  std::string name_;
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// Named substream of `master_seed`; throws InputError on an empty name.
RngStream derive_stream(std::uint64_t master_seed, std::string_view name);

}  // namespace fba
