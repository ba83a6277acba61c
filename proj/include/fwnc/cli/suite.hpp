#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fwnc/cli/experiment.hpp"

namespace fwnc::cli {

struct SuiteEntry {
  std::string name;
  std::optional<ExperimentResult> result;
  /// Set when the config could not be loaded or run.
  std::string error;
};

struct SuiteSummary {
  std::vector<SuiteEntry> entries;
  std::size_t failed_checks = 0;
  std::string table;

  /// Number of failed strict checks, saturated to the exit-status range.
  int exit_code() const { return static_cast<int>(std::min<std::size_t>(failed_checks, 255)); }
};

/// Runs every `*.cfg` in `dir` (sorted by name) and tabulates the checks. A
/// config that fails to load or run counts as one failed check. Artifacts
/// are written only when `base.write_artifacts` is set.
inline SuiteSummary run_suite(const std::filesystem::path& dir, const RunOptions& base) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) throw UsageError("suite: '" + dir.string() + "' is not a readable directory");
  std::vector<std::filesystem::path> configs;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".cfg") configs.push_back(entry.path());
  }
  if (ec) throw UsageError("suite: cannot list '" + dir.string() + "': " + ec.message());
  if (configs.empty()) throw UsageError("suite: no .cfg files in '" + dir.string() + "'");
  std::sort(configs.begin(), configs.end());

  SuiteSummary summary;
  std::ostringstream table;
  char line[256];
  std::snprintf(line, sizeof line, "%-32s %-11s %5s %5s %5s  %s\n", "config", "rule", "pass", "fail", "other",
                "failing checks");
  table << line;
  for (const auto& path : configs) {
    SuiteEntry entry;
    entry.name = path.stem().string();
    RunOptions opts = base;
    opts.stem = entry.name;
    try {
      const ExperimentConfig cfg = load_config(path);
      entry.result = run_experiment(cfg, opts);
    } catch (const Error& e) {
      entry.error = e.what();
    }

    if (!entry.result) {
      ++summary.failed_checks;
      std::snprintf(line, sizeof line, "%-32s %-11s %5s %5d %5s  error: %s\n", entry.name.c_str(), "-", "-", 1, "-",
                    entry.error.c_str());
      table << line;
    } else {
      std::size_t pass = 0, fail = 0, other = 0;
      std::string failing;
      for (const auto& c : entry.result->report.checks) {
        if (c.status == CheckStatus::passed) ++pass;
        else if (c.status == CheckStatus::violated) {
          ++fail;
          failing += failing.empty() ? c.name : "," + c.name;
        } else ++other;
      }
      if (base.strict) summary.failed_checks += fail;
      std::snprintf(line, sizeof line, "%-32s %-11s %5zu %5zu %5zu  %s\n", entry.name.c_str(),
                    std::string(to_string(entry.result->trace.step_rule)).c_str(), pass, fail, other,
                    failing.empty() ? "-" : failing.c_str());
      table << line;
    }
    summary.entries.push_back(std::move(entry));
  }
  table << "failed strict checks: " << summary.failed_checks << "\n";
  summary.table = table.str();
  return summary;
}

}  // namespace fwnc::cli
