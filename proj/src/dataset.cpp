#include "fbauction/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string_view>

#include "fbauction/core.hpp"
#include "fbauction/error.hpp"

namespace fba {
namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw InputError("line " + std::to_string(line) + ": " + what);
}

double normal(RngStream& s) {
  // Box-Muller; u1 in (0,1] keeps the log finite.
  const double u1 = 1.0 - s.uniform();
  const double u2 = s.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

std::vector<LabeledExample> parse_examples(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  std::size_t feature_dim = 0;
  bool have_header = false;
  std::vector<LabeledExample> out;

  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    const auto cells = split(line);
    if (!have_header) {
      if (cells.size() < 1 + kLabelCount) fail(line_no, "header needs an id column, features and 6 label columns");
      feature_dim = cells.size() - 1 - kLabelCount;
      for (std::size_t j = 0; j < kLabelCount; ++j) {
        if (trim(cells[1 + feature_dim + j]) != kLabelNames[j]) {
          fail(line_no, "expected label column '" + std::string(kLabelNames[j]) + "'");
        }
      }
      have_header = true;
      continue;
    }
    if (cells.size() != 1 + feature_dim + kLabelCount) {
      fail(line_no, "expected " + std::to_string(1 + feature_dim + kLabelCount) + " fields, found " +
                        std::to_string(cells.size()) + " (data row " + std::to_string(out.size()) + ")");
    }
    LabeledExample ex;
    ex.id = std::string(trim(cells[0]));
    ex.features.resize(feature_dim);
    for (std::size_t j = 0; j < feature_dim; ++j) {
      const std::string_view cell = trim(cells[1 + j]);
      double v = 0.0;
      auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc{} || end != cell.data() + cell.size() || !std::isfinite(v)) {
        fail(line_no, "feature f" + std::to_string(j) + " is not a finite number: '" + std::string(cell) + "'");
      }
      ex.features[j] = v;
    }
    for (std::size_t j = 0; j < kLabelCount; ++j) {
      const std::string_view cell = trim(cells[1 + feature_dim + j]);
      if (cell == "1") {
        ex.labels.set(j);
      } else if (cell != "0") {
        fail(line_no, "label " + std::string(kLabelNames[j]) + " must be 0 or 1, found '" + std::string(cell) +
                          "' (data row " + std::to_string(out.size()) + ")");
      }
    }
    out.push_back(std::move(ex));
  }
  if (!have_header) throw InputError("dataset is empty (no header row)");
  return out;
}

std::vector<LabeledExample> load_examples(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open dataset " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_examples(buf.str());
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_examples(const std::filesystem::path& path, const std::vector<LabeledExample>& examples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write dataset " + path.string());
  const std::size_t dim = examples.empty() ? 0 : examples.front().features.size();
  out << "id";
  for (std::size_t j = 0; j < dim; ++j) out << ",f" << j;
  for (auto name : kLabelNames) out << ',' << name;
  out << '\n';
  char buf[32];
  for (const LabeledExample& ex : examples) {
    if (ex.features.size() != dim) throw InputError("write_examples: ragged feature dimensions");
    out << ex.id;
    for (double v : ex.features) {
      auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
      out << ',' << std::string_view(buf, end - buf);
    }
    for (std::size_t j = 0; j < kLabelCount; ++j) out << ',' << (ex.labels.test(j) ? '1' : '0');
    out << '\n';
  }
  if (!out) throw IoError("failed writing dataset " + path.string());
}

std::vector<LabeledExample> generate_toxicity_proxy(const ToxicityProxyOptions& options, std::uint64_t seed) {
  if (options.embedding_dim == 0) throw InputError("proxy embedding dimension must be positive");
  const std::size_t dim = options.embedding_dim;

  RngStream geometry = derive_stream(seed, "proxy/geometry");
  std::vector<double> base(dim);
  for (double& v : base) v = normal(geometry);
  std::vector<std::vector<double>> offsets(kLabelCount, std::vector<double>(dim));
  for (auto& off : offsets) {
    for (double& v : off) v = options.separation * normal(geometry);
  }

  // P(toxic) and P(label | toxic) for the five child labels.
  constexpr double kToxic = 0.4;
  constexpr double kChild[kLabelCount] = {0.0, 0.25, 0.5, 0.2, 0.5, 0.25};

  RngStream labels = derive_stream(seed, "proxy/labels");
  RngStream noise = derive_stream(seed, "proxy/noise");
  std::vector<LabeledExample> out;
  out.reserve(options.examples);
  for (std::size_t n = 0; n < options.examples; ++n) {
    LabeledExample ex;
    ex.id = "proxy" + std::to_string(n);
    if (labels.bernoulli(kToxic)) {
      ex.labels.set(static_cast<std::size_t>(ToxicityLabel::toxic));
      for (std::size_t j = 1; j < kLabelCount; ++j) {
        if (labels.bernoulli(kChild[j])) ex.labels.set(j);
      }
    }
    ex.features = base;
    for (std::size_t j = 0; j < kLabelCount; ++j) {
      if (!ex.labels.test(j)) continue;
      for (std::size_t k = 0; k < dim; ++k) ex.features[k] += offsets[j][k];
    }
    for (double& v : ex.features) v += options.cluster_spread * normal(noise);
    out.push_back(std::move(ex));
  }
  return out;
}

}  // namespace fba
