#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fwnc/errors.hpp"
#include "fwnc/solver.hpp"

namespace fwnc::cli {

/// Inclusive range of iteration indices.
struct FitWindow {
  std::size_t first = 0;
  std::size_t last = std::numeric_limits<std::size_t>::max();
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  FitWindow window;
  std::size_t points = 0;
};

enum class NoFit { none, all_zero, too_few_points };

/// Either a fit or the reason there is none.
struct RateFitOutcome {
  std::optional<RateFit> fit;
  NoFit reason = NoFit::none;
};

inline constexpr std::size_t kMinFitPoints = 10;

/// Least-squares line through (log(t+1), log y) for t in the window and
/// y > 0. Fewer than ten positive points gives no fit.
inline RateFitOutcome fit_series(std::span<const std::size_t> ts, std::span<const double> ys, FitWindow window) {
  if (ts.size() != ys.size()) throw UsageError("fit: series lengths differ");
  if (window.first > window.last) throw UsageError("fit: empty window");
  std::vector<double> xs, ls;
  std::size_t in_window = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (ts[i] < window.first || ts[i] > window.last) continue;
    ++in_window;
    if (ys[i] > 0.0) {
      xs.push_back(std::log(static_cast<double>(ts[i]) + 1.0));
      ls.push_back(std::log(ys[i]));
    }
  }
  if (in_window > 0 && xs.empty()) return {std::nullopt, NoFit::all_zero};
  if (xs.size() < kMinFitPoints) return {std::nullopt, NoFit::too_few_points};

  const auto n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ls[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ls[i] - my);
    syy += (ls[i] - my) * (ls[i] - my);
  }
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ls[i] - (fit.intercept + fit.slope * xs[i]);
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  fit.window = window;
  fit.points = xs.size();
  return {fit, NoFit::none};
}

/// Empirical decay exponent of the minimal gap over the window.
inline RateFitOutcome fit_rate(const RunTrace& trace, FitWindow window = {}) {
  std::vector<std::size_t> ts;
  std::vector<double> ys;
  for (const auto& r : trace.records) {
    ts.push_back(r.t);
    ys.push_back(r.min_gap);
  }
  return fit_series(ts, ys, window);
}

}  // namespace fwnc::cli
