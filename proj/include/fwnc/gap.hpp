#pragma once

#include <string>

#include "fwnc/domains.hpp"
#include "fwnc/errors.hpp"
#include "fwnc/vector.hpp"

namespace fwnc {

/// Negative raw gaps down to this magnitude are treated as round-off.
inline constexpr double kGapClampTolerance = 1e-10;

/// Feasibility tolerance used when validating points handed to the gap and
/// the solver.
inline constexpr double kFeasibilityTolerance = 1e-9;

struct GapResult {
  double gap;
  Vector atom;       // oracle output s
  Vector direction;  // s - x
};

/// max(raw, 0) for raw >= -1e-10; anything more negative means the oracle
/// did not return a minimizer.
inline double clamp_gap(double raw) {
  if (raw < -kGapClampTolerance) {
    throw InternalError("negative Frank-Wolfe gap " + std::to_string(raw) +
                        " exceeds round-off tolerance; linear minimization oracle is defective");
  }
  return raw > 0.0 ? raw : 0.0;
}

/// Frank-Wolfe gap max_{s in M} <s - x, -grad>, together with the atom that
/// attains it and the direction s - x.
///
/// Membership of x is validated when the domain supports it; vertex lists
/// above three dimensions are trusted to be fed convex combinations.
inline GapResult fw_gap(const Vector& x, const Vector& grad, const Domain& domain) {
  require_same_dim(x, domain.dim(), "fw_gap (point)");
  require_same_dim(grad, domain.dim(), "fw_gap (gradient)");
  if (domain.membership_supported()) {
    if (auto why = domain.violation(x, kFeasibilityTolerance)) {
      throw UsageError("fw_gap: point is infeasible: " + *why);
    }
  }
  Vector atom = domain.lmo(grad);
  Vector direction = atom - x;
  const double raw = (x - atom).dot(grad);
  return GapResult{clamp_gap(raw), std::move(atom), std::move(direction)};
}

}  // namespace fwnc
