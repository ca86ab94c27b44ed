#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fbauction/core.hpp"

namespace fba {

inline constexpr const char* kCodeVersion = "0.1.0";

/// Everything needed to identify and reproduce one run.
struct RunMetadata {
  std::map<std::string, std::string> config;  // every effective key, defaults included
  std::uint64_t seed_index = 0;
  std::uint64_t seed = 0;                     // per-run master after sweep fan-out
  std::string code_version = kCodeVersion;
  std::string kernels;                        // kernel variant that produced the run
  bool identification_valid = true;           // false when exploration prices are not uniform
  std::vector<std::vector<double>> population;     // per-agent theta (synthetic source)
  std::vector<double> feature_min;            // learner feature scaling (dataset sources)
  std::vector<double> feature_max;

  friend bool operator==(const RunMetadata&, const RunMetadata&) = default;
};

struct Run {
  RunMetadata meta;
  std::vector<RoundRecord> records;
};

}  // namespace fba
