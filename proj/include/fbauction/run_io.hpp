#pragma once

// Line-oriented run files. Line 1 is a JSON metadata object; every following
// line is one JSON object per round holding the RoundRecord fields joined
// with that round's metrics. Output is a pure function of (metadata, records),
// so identical runs produce byte-identical files.

#include <filesystem>
#include <string>

#include "fbauction/metrics.hpp"
#include "fbauction/run.hpp"

namespace fba {

struct RunWriteOptions {
  bool contexts = true;  // per-agent context vectors are the bulk of the file
  MetricsOptions metrics;
};

std::string format_run(const Run& run, RunWriteOptions options = {});
void write_run(const std::filesystem::path& path, const Run& run, RunWriteOptions options = {});

Run parse_run(const std::string& text);
Run read_run(const std::filesystem::path& path);

}  // namespace fba
