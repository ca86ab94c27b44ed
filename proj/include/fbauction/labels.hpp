#pragma once

#include <array>
#include <bitset>
#include <cstddef>
#include <optional>
#include <string_view>

namespace fba {

/// Toxicity annotation categories, in dataset column order.
enum class ToxicityLabel : std::size_t { toxic, severe_toxic, obscene, threat, insult, identity_hate };

inline constexpr std::size_t kLabelCount = 6;
using LabelSet = std::bitset<kLabelCount>;

inline constexpr std::array<std::string_view, kLabelCount> kLabelNames{
    "toxic", "severe_toxic", "obscene", "threat", "insult", "identity_hate"};

inline constexpr std::string_view to_string(ToxicityLabel label) noexcept {
  return kLabelNames[static_cast<std::size_t>(label)];
}

inline std::optional<ToxicityLabel> parse_label(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kLabelCount; ++i) {
    if (kLabelNames[i] == name) return static_cast<ToxicityLabel>(i);
  }
  return std::nullopt;
}

}  // namespace fba
