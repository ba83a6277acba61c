#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fwnc/domains.hpp"
#include "fwnc/errors.hpp"
#include "fwnc/gap.hpp"
#include "fwnc/objectives.hpp"
#include "fwnc/vector.hpp"

namespace fwnc {

enum class StepRule { line_search, quad_bound, classic_decay };

inline std::string_view to_string(StepRule r) {
  switch (r) {
    case StepRule::line_search: return "linesearch";
    case StepRule::quad_bound: return "quadbound";
    case StepRule::classic_decay: return "classic";
  }
  return "?";
}

inline StepRule step_rule_from_string(std::string_view s) {
  if (s == "linesearch") return StepRule::line_search;
  if (s == "quadbound") return StepRule::quad_bound;
  if (s == "classic") return StepRule::classic_decay;
  throw UsageError("unknown step rule '" + std::string(s) + "' (expected linesearch, quadbound or classic)");
}

/// True for the two adaptive rules the non-convex rate covers.
inline bool is_adaptive(StepRule r) { return r != StepRule::classic_decay; }

struct SolverConfig {
  StepRule step_rule = StepRule::quad_bound;
  /// C >= C_f for the quadratic-bound step; for line search it only enters
  /// the reported bounds.
  double curvature_C = 1.0;
  double epsilon = 1e-8;
  std::size_t max_iters = 1000;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(curvature_C > 0.0) || !std::isfinite(curvature_C)) throw UsageError("solver: curvature C must be positive");
    if (!(epsilon >= 0.0)) throw UsageError("solver: epsilon must be >= 0");
  }
};

// ---------------------------------------------------------------------------
// Step sizes

/// min(gap / C, 1): minimizer over [0, 1] of -g*gamma + C*gamma^2/2.
inline double step_quadbound(double gap, double C) { return std::min(gap / C, 1.0); }

/// 2 / (t + 2).
inline double step_classic(std::size_t t) { return 2.0 / (static_cast<double>(t) + 2.0); }

/// Exact minimizer of phi(g) = f(x + g d) over [0, 1] for a quadratic.
/// With slope s = <grad f(x), d> and curvature q = d'Ad: q > 0 gives
/// clamp(-s/q, 0, 1); otherwise phi is concave or linear and the better
/// endpoint wins, ties going to 0.
inline double exact_linesearch_quadratic(const Objective& obj, const Vector& x, const Vector& d) {
  const double slope = obj.gradient(x).dot(d);
  const double curv = obj.curvature_along(d);
  if (curv > 0.0) return std::clamp(-slope / curv, 0.0, 1.0);
  return slope + 0.5 * curv < 0.0 ? 1.0 : 0.0;
}

/// Line search for an arbitrary phi on [0, 1]: a 65-point scan, then golden
/// section on the bracket around the best scan point. The result never has
/// a larger phi than the best scan point; scan ties go to the smaller step.
template <typename Phi>
double linesearch_generic(Phi&& phi, double tol = 1e-10) {
  constexpr int kScan = 65;
  std::array<double, kScan> values{};
  int best = 0;
  for (int i = 0; i < kScan; ++i) {
    values[static_cast<std::size_t>(i)] = phi(static_cast<double>(i) / (kScan - 1));
    if (values[static_cast<std::size_t>(i)] < values[static_cast<std::size_t>(best)]) best = i;
  }
  double best_gamma = static_cast<double>(best) / (kScan - 1);
  double best_val = values[static_cast<std::size_t>(best)];

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = static_cast<double>(std::max(best - 1, 0)) / (kScan - 1);
  double b = static_cast<double>(std::min(best + 1, kScan - 1)) / (kScan - 1);
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = phi(c), fd = phi(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = phi(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = phi(d);
    }
  }
  const double mid = 0.5 * (a + b);
  const double fmid = phi(mid);
  for (auto [g, v] : {std::pair{c, fc}, std::pair{d, fd}, std::pair{mid, fmid}}) {
    if (v < best_val) {
      best_val = v;
      best_gamma = g;
    }
  }
  return best_gamma;
}

// ---------------------------------------------------------------------------
// Bound quantities

/// Guaranteed one-step decrease: min(g^2 / 2C, g - (C/2) [g > C]).
inline double per_iter_decrease_bound(double gap, double C) {
  const double quadratic_branch = gap * gap / (2.0 * C);
  const double linear_branch = gap - (gap > C ? 0.5 * C : 0.0);
  return std::min(quadratic_branch, linear_branch);
}

/// max(2 h0, C) / sqrt(t + 1).
inline double theorem_bound_rhs(double h0, double C, std::size_t t) {
  return std::max(2.0 * h0, C) / std::sqrt(static_cast<double>(t) + 1.0);
}

/// Two-case bound: h0/(t+1) + C/2 while t + 1 <= 2 h0 / C, afterwards
/// sqrt(2 h0 C / (t + 1)).
inline double refined_bound_rhs(double h0, double C, std::size_t t) {
  const double n = static_cast<double>(t) + 1.0;
  if (n <= 2.0 * h0 / C) return h0 / n + 0.5 * C;
  return std::sqrt(2.0 * h0 * C / n);
}

/// sqrt(2 h0 C / (t + 1)), the rate once the minimal gap is below C.
inline double small_gap_rate_rhs(double h0, double C, std::size_t t) {
  return std::sqrt(2.0 * h0 * C / (static_cast<double>(t) + 1.0));
}

// ---------------------------------------------------------------------------
// Trace

enum class H0Provenance { exact_oracle, grid_estimate, unknown };

inline std::string_view to_string(H0Provenance p) {
  switch (p) {
    case H0Provenance::exact_oracle: return "exact_oracle";
    case H0Provenance::grid_estimate: return "grid_estimate";
    case H0Provenance::unknown: return "unknown";
  }
  return "?";
}

/// Known minimum of f over the domain and where it came from.
struct MinimumInfo {
  double value;
  H0Provenance provenance;
};

struct IterationRecord {
  std::size_t t = 0;
  double f_value = 0.0;
  double gap = 0.0;
  double min_gap = 0.0;
  double gamma = 0.0;
  double decrease_bound = 0.0;
  std::optional<double> theorem_rhs;
  std::optional<double> refined_rhs;
  /// Whether x^(t+1) was produced from this record (false for the last one).
  bool stepped = false;
  /// f(x^(t) + gamma* d_t) with gamma* = min(g_t / C, 1); set when stepped.
  std::optional<double> f_at_bound_step;
};

struct RunTrace {
  std::vector<IterationRecord> records;
  bool terminated_early = false;
  Vector final_point;
  std::optional<double> h0;
  H0Provenance h0_provenance = H0Provenance::unknown;
  StepRule step_rule = StepRule::quad_bound;
  double curvature_C = 0.0;
  /// x^(0), ..., x^(last); one point per record.
  std::vector<Vector> points;
};

/// Frank-Wolfe with adaptive (or classic) step sizes.
///
/// Record t holds f(x^(t)), g_t, the running minimum gap and the step taken
/// from x^(t). The loop stops at the first g_t <= epsilon or after
/// `max_iters` steps, so a full run has max_iters + 1 records and the last
/// record carries no step. When `minimum` is given, h0 = f(x^(0)) - minimum
/// (floored at zero) and the bound columns are filled.
inline RunTrace solve(const Objective& obj, const Domain& domain, const SolverConfig& config, const Vector& x0,
                      std::optional<MinimumInfo> minimum = std::nullopt) {
  config.validate();
  if (obj.dim() != domain.dim()) throw UsageError("solve: objective and domain dimensions differ");
  require_same_dim(x0, domain.dim(), "solve (x0)");
  if (!all_finite(x0)) throw UsageError("solve: x0 is not finite");
  if (domain.membership_supported()) {
    if (auto why = domain.violation(x0, kFeasibilityTolerance)) throw UsageError("solve: x0 is infeasible: " + *why);
  }

  const double C = config.curvature_C;
  RunTrace trace;
  trace.step_rule = config.step_rule;
  trace.curvature_C = C;
  trace.records.reserve(config.max_iters + 1);
  trace.points.reserve(config.max_iters + 1);

  Vector x = x0;
  double running_min = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0;; ++t) {
    const double f = obj.value(x);
    const Vector grad = obj.gradient(x);
    if (!std::isfinite(f) || !all_finite(grad)) {
      throw NumericError("non-finite objective or gradient at iteration " + std::to_string(t));
    }
    if (t == 0 && minimum) {
      trace.h0 = std::max(0.0, f - minimum->value);
      trace.h0_provenance = minimum->provenance;
    }

    const Vector atom = domain.lmo(grad);
    const Vector direction = atom - x;
    const double gap = clamp_gap((x - atom).dot(grad));
    running_min = std::min(running_min, gap);

    IterationRecord rec;
    rec.t = t;
    rec.f_value = f;
    rec.gap = gap;
    rec.min_gap = running_min;
    rec.decrease_bound = per_iter_decrease_bound(gap, C);
    if (trace.h0) {
      rec.theorem_rhs = theorem_bound_rhs(*trace.h0, C, t);
      rec.refined_rhs = refined_bound_rhs(*trace.h0, C, t);
    }
    trace.points.push_back(x);

    if (gap <= config.epsilon) {
      trace.terminated_early = true;
      trace.records.push_back(std::move(rec));
      break;
    }
    if (t == config.max_iters) {
      trace.records.push_back(std::move(rec));
      break;
    }

    double gamma = 0.0;
    switch (config.step_rule) {
      case StepRule::quad_bound: gamma = step_quadbound(gap, C); break;
      case StepRule::line_search: gamma = exact_linesearch_quadratic(obj, x, direction); break;
      case StepRule::classic_decay: gamma = step_classic(t); break;
    }
    if (!std::isfinite(gamma)) throw NumericError("non-finite step size at iteration " + std::to_string(t));
    rec.gamma = gamma;
    rec.stepped = true;
    rec.f_at_bound_step = obj.value(x + step_quadbound(gap, C) * direction);
    trace.records.push_back(std::move(rec));

    x = x + gamma * direction;
    if (!all_finite(x)) throw NumericError("non-finite iterate at iteration " + std::to_string(t + 1));
  }
  trace.final_point = x;
  return trace;
}

/// Runs from the domain's default start point.
inline RunTrace solve(const Objective& obj, const Domain& domain, const SolverConfig& config,
                      std::optional<MinimumInfo> minimum = std::nullopt) {
  return solve(obj, domain, config, domain.default_start(), minimum);
}

}  // namespace fwnc
