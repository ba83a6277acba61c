#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "fwnc/cli/config.hpp"
#include "fwnc/errors.hpp"
#include "fwnc/solver.hpp"

namespace fwnc::cli {

/// Frozen column layout of trace files.
inline constexpr std::string_view kTraceHeader = "t,f,gap,min_gap,gamma,decrease_bound,theorem_rhs,refined_rhs";

/// Trace as CSV text; reals at `digits` significant digits (17 round-trips
/// every double), absent h0-dependent values as empty fields.
inline std::string format_trace_csv(const RunTrace& trace, int digits = 17) {
  using detail::format_real;
  std::string out(kTraceHeader);
  out += '\n';
  for (const auto& r : trace.records) {
    out += std::to_string(r.t);
    for (double v : {r.f_value, r.gap, r.min_gap, r.gamma, r.decrease_bound}) {
      out += ',';
      out += format_real(v, digits);
    }
    for (const auto& v : {r.theorem_rhs, r.refined_rhs}) {
      out += ',';
      if (v) out += format_real(*v, digits);
    }
    out += '\n';
  }
  return out;
}

/// Writes `content` to a sibling temporary file and renames it over `path`.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw UsageError("cannot open '" + tmp.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw UsageError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw UsageError("cannot move '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
}

inline void emit_trace_csv(const RunTrace& trace, const std::filesystem::path& path, int digits = 17) {
  write_file_atomic(path, format_trace_csv(trace, digits));
}

/// One parsed CSV row; empty fields are absent.
struct CsvRow {
  std::size_t t = 0;
  double f = 0.0;
  double gap = 0.0;
  double min_gap = 0.0;
  double gamma = 0.0;
  double decrease_bound = 0.0;
  std::optional<double> theorem_rhs;
  std::optional<double> refined_rhs;
};

inline std::vector<CsvRow> parse_trace_csv(std::string_view text) {
  std::vector<CsvRow> rows;
  std::size_t pos = 0, line_no = 0;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line_no == 1) {
      if (line != kTraceHeader) throw ParseError("trace header does not match '" + std::string(kTraceHeader) + "'");
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      fields.push_back(line.substr(start, comma == std::string_view::npos ? line.size() - start : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    const std::string where = "trace line " + std::to_string(line_no);
    if (fields.size() != 8) throw ParseError(where + ": expected 8 fields");
    try {
      CsvRow row;
      row.t = detail::parse_count(fields[0]);
      row.f = detail::parse_real(fields[1]);
      row.gap = detail::parse_real(fields[2]);
      row.min_gap = detail::parse_real(fields[3]);
      row.gamma = detail::parse_real(fields[4]);
      row.decrease_bound = detail::parse_real(fields[5]);
      if (!fields[6].empty()) row.theorem_rhs = detail::parse_real(fields[6]);
      if (!fields[7].empty()) row.refined_rhs = detail::parse_real(fields[7]);
      rows.push_back(row);
    } catch (const Error& e) {
      throw ParseError(where + ": " + e.what());
    }
  }
  if (line_no == 0) throw ParseError("empty trace file");
  return rows;
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::vector<CsvRow> read_trace_csv(const std::filesystem::path& path) {
  return parse_trace_csv(read_text_file(path));
}

}  // namespace fwnc::cli
