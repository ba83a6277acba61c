#pragma once

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>

#include "fwnc/cli/config.hpp"
#include "fwnc/cli/csv.hpp"
#include "fwnc/cli/rate_fit.hpp"
#include "fwnc/domains.hpp"
#include "fwnc/objectives.hpp"
#include "fwnc/solver.hpp"
#include "fwnc/trace_check.hpp"

namespace fwnc::cli {

/// Samples used for the heuristic curvature mode.
inline constexpr std::size_t kCurvatureSamples = 100000;
/// Random points for the sampled descent-lemma and gradient invariants.
inline constexpr std::size_t kDescentSamples = 1000;
inline constexpr std::size_t kGradientSamples = 100;

struct RunOptions {
  bool strict = true;
  std::optional<std::uint64_t> seed_override;
  /// Directory for artifacts; relative output paths are resolved against it.
  std::filesystem::path out_dir = ".";
  /// File stem used when the config names no output paths.
  std::string stem = "experiment";
  bool write_artifacts = true;
};

struct ResolvedCurvature {
  double value = 0.0;
  CurvatureMode mode = CurvatureMode::analytic;
  std::optional<double> analytic_bound;
  bool certified = false;
};

struct ExperimentResult {
  RunTrace trace;
  BoundReport report;
  ResolvedCurvature curvature;
  RateFitOutcome rate;
  std::optional<std::filesystem::path> trace_path;
  std::optional<std::filesystem::path> report_path;
  std::string report_json;
  bool strict = true;

  int exit_code() const { return strict && report.has_violations() ? 1 : 0; }
};

/// Curvature constant per the configured mode. The analytic value is the
/// Lipschitz bound L * diam^2 and is always certified; sampled and explicit
/// values are certified only when they reach that bound.
inline ResolvedCurvature resolve_curvature(const ExperimentConfig& cfg, Objective& obj, const Domain& domain,
                                           std::uint64_t seed) {
  ResolvedCurvature out;
  out.mode = cfg.solver.c_mode;
  if (obj.kind() == Objective::Kind::quadratic) obj = obj.with_estimated_lipschitz(seed);
  out.analytic_bound = curvature_lipschitz_bound(obj, domain, cfg.domain.norm).value;
  switch (cfg.solver.c_mode) {
    case CurvatureMode::analytic:
      out.value = *out.analytic_bound;
      out.certified = true;
      break;
    case CurvatureMode::sampled:
      out.value = curvature_sampled(obj, domain, kCurvatureSamples, seed).value;
      out.certified = out.value >= *out.analytic_bound;
      break;
    case CurvatureMode::explicit_value:
      out.value = *cfg.solver.c_value;
      out.certified = out.value >= *out.analytic_bound;
      break;
  }
  if (!(out.value > 0.0)) {
    throw UsageError("resolved curvature constant is " + detail::format_real(out.value) +
                     "; use C_mode = explicit with a positive C");
  }
  return out;
}

/// Global minimum used for h0: exact for diagonal objectives on boxes, a
/// grid estimate in dimension <= 3, unknown otherwise.
inline std::optional<MinimumInfo> resolve_minimum(const Objective& obj, const Domain& domain) {
  if (obj.kind() == Objective::Kind::diagonal_quadratic && std::holds_alternative<Domain::Box>(domain.kind())) {
    return MinimumInfo{global_min_separable_box(obj, domain).min_value, H0Provenance::exact_oracle};
  }
  if (domain.dim() <= 3 && !std::holds_alternative<Domain::AtomSet>(domain.kind())) {
    static constexpr std::size_t kResolution[] = {0, 100001, 1001, 201};
    try {
      const auto res = grid_min(obj, domain, kResolution[domain.dim()]);
      return MinimumInfo{res.min_value, H0Provenance::grid_estimate};
    } catch (const UsageError&) {
      return std::nullopt;
    }
  }
  return std::nullopt;
}

inline nlohmann::ordered_json check_to_json(const CheckResult& c) {
  nlohmann::ordered_json j;
  j["name"] = c.name;
  j["status"] = std::string(to_string(c.status));
  j["checked"] = c.checked;
  j["violations"] = c.violations;
  j["max_violation"] = c.max_violation;
  j["first_violation"] = c.first_violation ? nlohmann::ordered_json(*c.first_violation) : nlohmann::ordered_json();
  j["note"] = c.note;
  return j;
}

inline std::string report_to_json(const ExperimentConfig& cfg, const ExperimentResult& r) {
  nlohmann::ordered_json j;
  const auto& tr = r.trace;
  j["objective"] = std::string(to_string(cfg.objective.kind));
  j["domain"] = std::string(to_string(cfg.domain.kind));
  j["dimension"] = tr.final_point.size();
  j["norm"] = std::string(to_string(cfg.domain.norm));
  j["step_rule"] = std::string(to_string(tr.step_rule));
  j["C"] = r.curvature.value;
  j["C_mode"] = std::string(to_string(r.curvature.mode));
  j["C_certified"] = r.curvature.certified;
  j["C_heuristic"] = r.curvature.mode == CurvatureMode::sampled;
  j["analytic_C"] = r.curvature.analytic_bound ? nlohmann::ordered_json(*r.curvature.analytic_bound)
                                               : nlohmann::ordered_json();
  j["h0"] = tr.h0 ? nlohmann::ordered_json(*tr.h0) : nlohmann::ordered_json();
  j["h0_provenance"] = std::string(to_string(tr.h0_provenance));
  j["steps"] = tr.records.size() - 1;
  j["terminated_early"] = tr.terminated_early;
  j["final_f"] = tr.records.back().f_value;
  j["final_gap"] = tr.records.back().gap;
  j["final_min_gap"] = tr.records.back().min_gap;
  nlohmann::ordered_json fit;
  if (r.rate.fit) {
    fit["slope"] = r.rate.fit->slope;
    fit["intercept"] = r.rate.fit->intercept;
    fit["r_squared"] = r.rate.fit->r_squared;
    fit["t_min"] = r.rate.fit->window.first;
    fit["t_max"] = std::min<std::size_t>(r.rate.fit->window.last, tr.records.back().t);
    fit["points"] = r.rate.fit->points;
  } else {
    fit["no_fit"] = r.rate.reason == NoFit::all_zero ? "all minimal gaps are zero in the window"
                                                     : "fewer than 10 positive minimal gaps in the window";
  }
  j["rate_fit"] = fit;
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const auto& c : r.report.checks) checks.push_back(check_to_json(c));
  j["checks"] = checks;
  j["strict"] = r.strict;
  j["violations"] = r.report.violated_count();
  j["passed"] = !r.report.has_violations();
  return j.dump(2) + "\n";
}

/// Builds the instance, resolves C and h0, runs the solver, checks every
/// bound and invariant, and (optionally) writes the CSV trace and the JSON
/// report.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opts = {}) {
  const std::uint64_t seed = opts.seed_override.value_or(cfg.solver.seed);
  Objective obj = build_objective(cfg.objective);
  const Domain domain = build_domain(cfg.domain);

  ExperimentResult result;
  result.strict = opts.strict;
  result.curvature = resolve_curvature(cfg, obj, domain, seed);

  SolverConfig solver;
  solver.step_rule = cfg.solver.step_rule;
  solver.curvature_C = result.curvature.value;
  solver.epsilon = cfg.solver.epsilon;
  solver.max_iters = cfg.solver.max_iters;
  solver.seed = seed;

  result.trace = solve(obj, domain, solver, start_point(cfg, domain), resolve_minimum(obj, domain));

  CheckOptions check_opts;
  check_opts.curvature_certified = result.curvature.certified;
  result.report = check_trace(result.trace, solver.curvature_C, check_opts);
  result.report.append(check_descent_lemma_sampled(obj, domain, solver.curvature_C, kDescentSamples, seed,
                                                   result.curvature.certified));
  result.report.append(check_gradient(obj, domain, kGradientSamples, seed));
  result.report.append(check_feasibility(result.trace, domain));

  result.rate = fit_rate(result.trace, FitWindow{10, std::numeric_limits<std::size_t>::max()});
  result.report_json = report_to_json(cfg, result);

  if (opts.write_artifacts) {
    const std::filesystem::path trace_name = cfg.output.trace.empty() ? opts.stem + ".trace.csv" : cfg.output.trace;
    const std::filesystem::path report_name =
        cfg.output.report.empty() ? opts.stem + ".report.json" : cfg.output.report;
    result.trace_path = trace_name.is_absolute() ? trace_name : opts.out_dir / trace_name;
    result.report_path = report_name.is_absolute() ? report_name : opts.out_dir / report_name;
    std::filesystem::create_directories(result.trace_path->parent_path().empty() ? "." : result.trace_path->parent_path());
    std::filesystem::create_directories(result.report_path->parent_path().empty() ? "."
                                                                                  : result.report_path->parent_path());
    emit_trace_csv(result.trace, *result.trace_path, cfg.output.digits);
    write_file_atomic(*result.report_path, result.report_json);
  }
  return result;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return parse_config(text);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace fwnc::cli
