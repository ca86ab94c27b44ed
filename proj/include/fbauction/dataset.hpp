#pragma once

// Labeled embedding datasets for the toxicity-annotation experiment.
//
// CSV schema: a header row, then one row per example with columns
//   id, f0, ..., f{D-1}, toxic, severe_toxic, obscene, threat, insult, identity_hate
// Feature cells are decimal numbers, label cells are 0 or 1. Fields are not
// quoted, so ids must not contain commas.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fbauction/labels.hpp"

namespace fba {

struct LabeledExample {
  std::string id;
  std::vector<double> features;
  LabelSet labels;

  friend bool operator==(const LabeledExample&, const LabeledExample&) = default;
};

/// Parses a dataset file. Errors name the 1-based file line.
std::vector<LabeledExample> load_examples(const std::filesystem::path& path);
std::vector<LabeledExample> parse_examples(const std::string& text);

void write_examples(const std::filesystem::path& path, const std::vector<LabeledExample>& examples);

struct ToxicityProxyOptions {
  std::size_t examples = 4000;
  std::size_t embedding_dim = 64;
  double cluster_spread = 1.0;    // within-pattern standard deviation
  double separation = 1.5;        // scale of each label's mean offset
};

/// Synthetic stand-in for embedded toxic comments: label sets are drawn from
/// a correlated prior (toxic is the parent of the other five), and each
/// example's embedding is a Gaussian centred on the sum of its labels' offset
/// vectors plus a shared base.
std::vector<LabeledExample> generate_toxicity_proxy(const ToxicityProxyOptions& options, std::uint64_t seed);

}  // namespace fba
