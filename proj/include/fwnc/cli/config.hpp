#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "fwnc/domains.hpp"
#include "fwnc/errors.hpp"
#include "fwnc/gap.hpp"
#include "fwnc/objectives.hpp"
#include "fwnc/solver.hpp"

namespace fwnc::cli {

enum class ObjectiveKind { quadratic, diagonal_quadratic };
enum class DomainKind { simplex, box, l1ball, atoms };
enum class CurvatureMode { analytic, sampled, explicit_value };

inline std::string_view to_string(ObjectiveKind k) {
  return k == ObjectiveKind::quadratic ? "quadratic" : "diagonal_quadratic";
}

inline std::string_view to_string(DomainKind k) {
  switch (k) {
    case DomainKind::simplex: return "simplex";
    case DomainKind::box: return "box";
    case DomainKind::l1ball: return "l1ball";
    case DomainKind::atoms: return "atoms";
  }
  return "?";
}

inline std::string_view to_string(CurvatureMode m) {
  switch (m) {
    case CurvatureMode::analytic: return "analytic";
    case CurvatureMode::sampled: return "sampled";
    case CurvatureMode::explicit_value: return "explicit";
  }
  return "?";
}

using RowList = std::vector<std::vector<double>>;

struct ObjectiveBlock {
  ObjectiveKind kind = ObjectiveKind::diagonal_quadratic;
  RowList matrix;
  std::vector<double> diagonal;
  std::vector<double> b;
  double constant = 0.0;
  std::optional<double> lipschitz;
  bool operator==(const ObjectiveBlock&) const = default;
};

struct DomainBlock {
  DomainKind kind = DomainKind::box;
  std::size_t dim = 0;
  std::vector<double> lo;
  std::vector<double> hi;
  double radius = 0.0;
  RowList vertices;
  Norm norm = Norm::l2;
  bool operator==(const DomainBlock&) const = default;
};

struct SolverBlock {
  StepRule step_rule = StepRule::quad_bound;
  CurvatureMode c_mode = CurvatureMode::analytic;
  std::optional<double> c_value;
  double epsilon = 1e-8;
  std::size_t max_iters = 1000;
  std::optional<std::vector<double>> x0;
  std::uint64_t seed = 0;
  bool operator==(const SolverBlock&) const = default;
};

struct OutputBlock {
  std::string trace;
  std::string report;
  int digits = 17;
  bool operator==(const OutputBlock&) const = default;
};

/// Parsed and validated experiment description.
struct ExperimentConfig {
  ObjectiveBlock objective;
  DomainBlock domain;
  SolverBlock solver;
  OutputBlock output;
  bool operator==(const ExperimentConfig&) const = default;
};

inline Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline Objective build_objective(const ObjectiveBlock& o) {
  if (o.kind == ObjectiveKind::diagonal_quadratic) {
    Vector b = o.b.empty() ? Vector::Zero(static_cast<Eigen::Index>(o.diagonal.size())) : to_vector(o.b);
    return Objective::diagonal(to_vector(o.diagonal), std::move(b), o.constant);
  }
  const auto d = static_cast<Eigen::Index>(o.matrix.size());
  Matrix a(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const auto& row = o.matrix[static_cast<std::size_t>(i)];
    if (static_cast<Eigen::Index>(row.size()) != d) throw UsageError("matrix is not square");
    for (Eigen::Index j = 0; j < d; ++j) a(i, j) = row[static_cast<std::size_t>(j)];
  }
  Vector b = o.b.empty() ? Vector::Zero(d) : to_vector(o.b);
  return Objective::quadratic(std::move(a), std::move(b), o.constant, o.lipschitz);
}

inline Domain build_domain(const DomainBlock& d) {
  switch (d.kind) {
    case DomainKind::simplex: return Domain::simplex(static_cast<Eigen::Index>(d.dim));
    case DomainKind::box: return Domain::box(to_vector(d.lo), to_vector(d.hi));
    case DomainKind::l1ball: return Domain::l1_ball(d.radius, static_cast<Eigen::Index>(d.dim));
    case DomainKind::atoms: {
      std::vector<Vector> verts;
      verts.reserve(d.vertices.size());
      for (const auto& row : d.vertices) verts.push_back(to_vector(row));
      return Domain::atoms(std::move(verts));
    }
  }
  throw UsageError("unknown domain kind");
}

inline Vector start_point(const ExperimentConfig& cfg, const Domain& domain) {
  return cfg.solver.x0 ? to_vector(*cfg.solver.x0) : domain.default_start();
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::string format_real(double v, int digits = 17) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

inline double parse_real(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty()) throw ParseError("expected a real number, got '" + std::string(s) + "'");
  if (!std::isfinite(v)) throw ParseError("non-finite value '" + std::string(s) + "'");
  return v;
}

inline std::uint64_t parse_count(std::string_view s) {
  s = trim(s);
  std::uint64_t v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty()) {
    throw ParseError("expected a nonnegative integer, got '" + std::string(s) + "'");
  }
  return v;
}

inline RowList parse_rows(std::string_view s) {
  s = trim(s);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') throw ParseError("expected a bracketed list '[...]'");
  s = trim(s.substr(1, s.size() - 2));
  RowList rows;
  if (s.empty()) return rows;
  std::size_t start = 0;
  while (true) {
    const std::size_t semi = s.find(';', start);
    std::string_view row_text = s.substr(start, semi == std::string_view::npos ? s.size() - start : semi - start);
    std::vector<double> row;
    std::size_t pos = 0;
    while (true) {
      const std::size_t comma = row_text.find(',', pos);
      row.push_back(parse_real(row_text.substr(pos, comma == std::string_view::npos ? row_text.size() - pos : comma - pos)));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    rows.push_back(std::move(row));
    if (semi == std::string_view::npos) break;
    start = semi + 1;
  }
  return rows;
}

inline std::vector<double> parse_vector(std::string_view s) {
  RowList rows = parse_rows(s);
  if (rows.size() != 1) throw ParseError("expected a vector (no ';' row separators)");
  return std::move(rows.front());
}

inline std::string format_vector(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_real(v[i]);
  }
  return out + "]";
}

inline std::string format_rows(const RowList& rows) {
  std::string out = "[";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (r) out += "; ";
    for (std::size_t i = 0; i < rows[r].size(); ++i) {
      if (i) out += ", ";
      out += format_real(rows[r][i]);
    }
  }
  return out + "]";
}

}  // namespace detail

/// Parses the line-oriented `section.key = value` format.
///
/// Sections are objective, domain, solver and output; '#' starts a comment.
/// Vectors are written `[a, b, c]` and matrices `[a, b; c, d]`. Defaults:
/// epsilon 1e-8, max_iters 1000, seed 0, C_mode analytic, norm l2, digits 17.
/// The result is validated by building the objective, domain and start
/// point; any failure is a ParseError naming the line and field.
inline ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  std::map<std::string, std::size_t> seen;  // key -> line

  static const std::set<std::string> kKeys = {
      "objective.kind",   "objective.matrix", "objective.diagonal", "objective.b",      "objective.constant",
      "objective.L",      "domain.kind",      "domain.dim",         "domain.lo",        "domain.hi",
      "domain.radius",    "domain.vertices",  "domain.norm",        "solver.step_rule", "solver.C_mode",
      "solver.C",         "solver.epsilon",   "solver.max_iters",   "solver.x0",        "solver.seed",
      "output.trace",     "output.report",    "output.digits"};

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;

    const std::string where = "line " + std::to_string(line_no);
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(where + ": expected 'section.key = value'");
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string_view value = detail::trim(line.substr(eq + 1));
    if (!kKeys.count(key)) throw ParseError(where + ": unknown key '" + key + "'");
    if (seen.count(key)) throw ParseError(where + ": " + key + ": duplicate (first set on line " + std::to_string(seen[key]) + ")");
    seen[key] = line_no;

    try {
      if (key == "objective.kind") {
        if (value == "quadratic") cfg.objective.kind = ObjectiveKind::quadratic;
        else if (value == "diagonal_quadratic") cfg.objective.kind = ObjectiveKind::diagonal_quadratic;
        else throw ParseError("expected quadratic or diagonal_quadratic");
      } else if (key == "objective.matrix") {
        cfg.objective.matrix = detail::parse_rows(value);
      } else if (key == "objective.diagonal") {
        cfg.objective.diagonal = detail::parse_vector(value);
      } else if (key == "objective.b") {
        cfg.objective.b = detail::parse_vector(value);
      } else if (key == "objective.constant") {
        cfg.objective.constant = detail::parse_real(value);
      } else if (key == "objective.L") {
        cfg.objective.lipschitz = detail::parse_real(value);
      } else if (key == "domain.kind") {
        if (value == "simplex") cfg.domain.kind = DomainKind::simplex;
        else if (value == "box") cfg.domain.kind = DomainKind::box;
        else if (value == "l1ball") cfg.domain.kind = DomainKind::l1ball;
        else if (value == "atoms") cfg.domain.kind = DomainKind::atoms;
        else throw ParseError("expected simplex, box, l1ball or atoms");
      } else if (key == "domain.dim") {
        cfg.domain.dim = detail::parse_count(value);
      } else if (key == "domain.lo") {
        cfg.domain.lo = detail::parse_vector(value);
      } else if (key == "domain.hi") {
        cfg.domain.hi = detail::parse_vector(value);
      } else if (key == "domain.radius") {
        cfg.domain.radius = detail::parse_real(value);
      } else if (key == "domain.vertices") {
        cfg.domain.vertices = detail::parse_rows(value);
      } else if (key == "domain.norm") {
        cfg.domain.norm = norm_from_string(value);
      } else if (key == "solver.step_rule") {
        cfg.solver.step_rule = step_rule_from_string(value);
      } else if (key == "solver.C_mode") {
        if (value == "analytic") cfg.solver.c_mode = CurvatureMode::analytic;
        else if (value == "sampled") cfg.solver.c_mode = CurvatureMode::sampled;
        else if (value == "explicit") cfg.solver.c_mode = CurvatureMode::explicit_value;
        else throw ParseError("expected analytic, sampled or explicit");
      } else if (key == "solver.C") {
        cfg.solver.c_value = detail::parse_real(value);
      } else if (key == "solver.epsilon") {
        cfg.solver.epsilon = detail::parse_real(value);
      } else if (key == "solver.max_iters") {
        cfg.solver.max_iters = detail::parse_count(value);
      } else if (key == "solver.x0") {
        cfg.solver.x0 = detail::parse_vector(value);
      } else if (key == "solver.seed") {
        cfg.solver.seed = detail::parse_count(value);
      } else if (key == "output.trace") {
        cfg.output.trace = std::string(value);
      } else if (key == "output.report") {
        cfg.output.report = std::string(value);
      } else if (key == "output.digits") {
        const auto digits = detail::parse_count(value);
        if (digits < 1 || digits > 17) throw ParseError("digits must be in 1..17");
        cfg.output.digits = static_cast<int>(digits);
      }
    } catch (const Error& e) {
      throw ParseError(where + ": " + key + ": " + e.what());
    }
  }

  auto where = [&](const std::string& key) {
    return seen.count(key) ? "line " + std::to_string(seen[key]) + ": " + key : key;
  };
  auto require = [&](const std::string& key) {
    if (!seen.count(key)) throw ParseError("missing required field " + key);
  };

  require("objective.kind");
  require("domain.kind");
  require("solver.step_rule");

  // Objective
  if (cfg.objective.kind == ObjectiveKind::quadratic) {
    require("objective.matrix");
    if (seen.count("objective.diagonal")) throw ParseError(where("objective.diagonal") + ": not allowed for kind quadratic");
    const auto& m = cfg.objective.matrix;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i].size() != m.size()) throw ParseError(where("objective.matrix") + ": matrix is not square");
    }
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (std::size_t j = i + 1; j < m.size(); ++j) {
        if (std::abs(m[i][j] - m[j][i]) > 1e-12) {
          throw ParseError(where("objective.matrix") + ": matrix is not symmetric at (" + std::to_string(i) + "," +
                           std::to_string(j) + ")");
        }
      }
    }
  } else {
    require("objective.diagonal");
    if (seen.count("objective.matrix")) throw ParseError(where("objective.matrix") + ": not allowed for kind diagonal_quadratic");
    if (seen.count("objective.L")) throw ParseError(where("objective.L") + ": exact for diagonal objectives, do not supply");
  }
  Objective objective = [&] {
    try {
      return build_objective(cfg.objective);
    } catch (const Error& e) {
      throw ParseError(std::string("objective: ") + e.what());
    }
  }();

  // Domain
  auto forbid = [&](std::initializer_list<const char*> keys) {
    for (const char* k : keys) {
      if (seen.count(k)) throw ParseError(where(k) + ": not used by domain kind " + std::string(to_string(cfg.domain.kind)));
    }
  };
  switch (cfg.domain.kind) {
    case DomainKind::simplex:
      require("domain.dim");
      forbid({"domain.lo", "domain.hi", "domain.radius", "domain.vertices"});
      break;
    case DomainKind::box:
      require("domain.lo");
      require("domain.hi");
      forbid({"domain.dim", "domain.radius", "domain.vertices"});
      break;
    case DomainKind::l1ball:
      require("domain.dim");
      require("domain.radius");
      forbid({"domain.lo", "domain.hi", "domain.vertices"});
      break;
    case DomainKind::atoms:
      require("domain.vertices");
      forbid({"domain.dim", "domain.lo", "domain.hi", "domain.radius"});
      break;
  }
  Domain domain = [&] {
    try {
      return build_domain(cfg.domain);
    } catch (const Error& e) {
      throw ParseError(where("domain.kind") + ": " + e.what());
    }
  }();
  if (domain.dim() != objective.dim()) {
    throw ParseError("domain dimension " + std::to_string(domain.dim()) + " does not match objective dimension " +
                     std::to_string(objective.dim()));
  }

  // Solver
  if (cfg.solver.c_mode == CurvatureMode::explicit_value) {
    require("solver.C");
    if (!(*cfg.solver.c_value > 0.0)) throw ParseError(where("solver.C") + ": must be positive");
  } else if (seen.count("solver.C")) {
    throw ParseError(where("solver.C") + ": only allowed with C_mode = explicit");
  }
  if (!(cfg.solver.epsilon >= 0.0)) throw ParseError(where("solver.epsilon") + ": must be >= 0");
  if (cfg.solver.x0) {
    const Vector x0 = to_vector(*cfg.solver.x0);
    if (x0.size() != domain.dim()) throw ParseError(where("solver.x0") + ": dimension mismatch");
    if (domain.membership_supported()) {
      if (auto why = domain.violation(x0, kFeasibilityTolerance)) throw ParseError(where("solver.x0") + ": infeasible: " + *why);
    }
  }
  return cfg;
}

/// Canonical text form; parse_config(emit_config(c)) == c.
inline std::string emit_config(const ExperimentConfig& cfg) {
  using detail::format_real;
  std::ostringstream out;
  const auto& o = cfg.objective;
  out << "objective.kind = " << to_string(o.kind) << "\n";
  if (o.kind == ObjectiveKind::quadratic) out << "objective.matrix = " << detail::format_rows(o.matrix) << "\n";
  else out << "objective.diagonal = " << detail::format_vector(o.diagonal) << "\n";
  if (!o.b.empty()) out << "objective.b = " << detail::format_vector(o.b) << "\n";
  if (o.constant != 0.0) out << "objective.constant = " << format_real(o.constant) << "\n";
  if (o.lipschitz) out << "objective.L = " << format_real(*o.lipschitz) << "\n";

  const auto& d = cfg.domain;
  out << "domain.kind = " << to_string(d.kind) << "\n";
  switch (d.kind) {
    case DomainKind::simplex: out << "domain.dim = " << d.dim << "\n"; break;
    case DomainKind::box:
      out << "domain.lo = " << detail::format_vector(d.lo) << "\n";
      out << "domain.hi = " << detail::format_vector(d.hi) << "\n";
      break;
    case DomainKind::l1ball:
      out << "domain.dim = " << d.dim << "\n";
      out << "domain.radius = " << format_real(d.radius) << "\n";
      break;
    case DomainKind::atoms: out << "domain.vertices = " << detail::format_rows(d.vertices) << "\n"; break;
  }
  out << "domain.norm = " << to_string(d.norm) << "\n";

  const auto& s = cfg.solver;
  out << "solver.step_rule = " << to_string(s.step_rule) << "\n";
  out << "solver.C_mode = " << to_string(s.c_mode) << "\n";
  if (s.c_value) out << "solver.C = " << format_real(*s.c_value) << "\n";
  out << "solver.epsilon = " << format_real(s.epsilon) << "\n";
  out << "solver.max_iters = " << s.max_iters << "\n";
  if (s.x0) out << "solver.x0 = " << detail::format_vector(*s.x0) << "\n";
  out << "solver.seed = " << s.seed << "\n";

  if (!cfg.output.trace.empty()) out << "output.trace = " << cfg.output.trace << "\n";
  if (!cfg.output.report.empty()) out << "output.report = " << cfg.output.report << "\n";
  out << "output.digits = " << cfg.output.digits << "\n";
  return out.str();
}

}  // namespace fwnc::cli
