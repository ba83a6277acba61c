#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

#include "fwnc/domains.hpp"
#include "fwnc/errors.hpp"
#include "fwnc/sampling.hpp"
#include "fwnc/vector.hpp"

namespace fwnc {

/// Largest absolute eigenvalue of a symmetric matrix by power iteration.
/// Stops after `max_iters` or when successive estimates agree to `tol`
/// relative. The start vector is drawn from `seed`.
inline double power_iteration_spectral_radius(const Matrix& a, std::uint64_t seed, int max_iters = 1000,
                                              double tol = 1e-10) {
  if (a.rows() != a.cols()) throw UsageError("power iteration: matrix must be square");
  const Eigen::Index d = a.rows();
  if (d == 0) return 0.0;
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Vector v(d);
  for (Eigen::Index i = 0; i < d; ++i) v[i] = unit(rng);
  if (v.norm() == 0.0) v[0] = 1.0;
  v.normalize();
  double estimate = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    Vector w = a * v;
    const double next = w.norm();
    if (next == 0.0) return 0.0;
    v = w / next;
    const bool done = it > 0 && std::abs(next - estimate) <= tol * next;
    estimate = next;
    if (done) break;
  }
  return estimate;
}

/// f(x) = 1/2 x'Ax + b'x + c with A symmetric, either dense or diagonal.
///
/// The optional Lipschitz constant is the spectral radius of A, i.e. the
/// gradient's Lipschitz constant for the Euclidean norm. It is exact for
/// diagonal objectives and must be supplied (or power-iterated) for dense
/// ones.
class Objective {
public:
  enum class Kind { quadratic, diagonal_quadratic };

  /// Dense quadratic; A is replaced by (A + A') / 2.
  static Objective quadratic(Matrix a, Vector b, double constant = 0.0,
                             std::optional<double> lipschitz = std::nullopt) {
    if (a.rows() != a.cols()) throw UsageError("quadratic: matrix must be square");
    if (a.rows() < 1) throw UsageError("quadratic: dimension must be >= 1");
    require_same_dim(b, a.rows(), "quadratic (linear term)");
    if (!a.allFinite() || !all_finite(b) || !std::isfinite(constant)) {
      throw UsageError("quadratic: coefficients must be finite");
    }
    if (lipschitz && !(*lipschitz >= 0.0)) throw UsageError("quadratic: Lipschitz constant must be >= 0");
    Matrix sym = 0.5 * (a + a.transpose());
    return Objective(Kind::quadratic, std::move(sym), Vector(), std::move(b), constant, lipschitz);
  }

  static Objective diagonal(Vector diag, Vector b, double constant = 0.0) {
    if (diag.size() < 1) throw UsageError("diagonal quadratic: dimension must be >= 1");
    require_same_dim(b, diag.size(), "diagonal quadratic (linear term)");
    if (!all_finite(diag) || !all_finite(b) || !std::isfinite(constant)) {
      throw UsageError("diagonal quadratic: coefficients must be finite");
    }
    const double lip = diag.cwiseAbs().maxCoeff();
    return Objective(Kind::diagonal_quadratic, Matrix(), std::move(diag), std::move(b), constant, lip);
  }

  Kind kind() const noexcept { return kind_; }
  std::string_view kind_name() const {
    return kind_ == Kind::quadratic ? "quadratic" : "diagonal_quadratic";
  }
  Eigen::Index dim() const noexcept { return linear_.size(); }
  const Vector& linear() const noexcept { return linear_; }
  double constant() const noexcept { return constant_; }
  const Vector& diag() const noexcept { return diag_; }
  std::optional<double> lipschitz() const noexcept { return lipschitz_; }

  /// Dense copy of A regardless of representation.
  Matrix hessian() const {
    if (kind_ == Kind::quadratic) return dense_;
    return diag_.asDiagonal();
  }

  Objective with_lipschitz(double lipschitz) const {
    if (!(lipschitz >= 0.0)) throw UsageError("Lipschitz constant must be >= 0");
    Objective copy = *this;
    copy.lipschitz_ = lipschitz;
    return copy;
  }

  /// Copy whose Lipschitz constant is set by power iteration if it was absent.
  Objective with_estimated_lipschitz(std::uint64_t seed) const {
    if (lipschitz_) return *this;
    return with_lipschitz(power_iteration_spectral_radius(dense_, seed));
  }

  double value(const Vector& x) const {
    require_same_dim(x, dim(), "value");
    return 0.5 * x.dot(apply(x)) + linear_.dot(x) + constant_;
  }

  Vector gradient(const Vector& x) const {
    require_same_dim(x, dim(), "gradient");
    return apply(x) + linear_;
  }

  /// d'Ad.
  double curvature_along(const Vector& d) const {
    require_same_dim(d, dim(), "curvature_along");
    return d.dot(apply(d));
  }

  /// f(y) - f(x) - <grad f(x), y - x>, which for a quadratic is exactly
  /// 1/2 (y-x)'A(y-x).
  double linearization_error(const Vector& x, const Vector& y) const {
    require_same_dim(x, dim(), "linearization_error");
    return 0.5 * curvature_along(y - x);
  }

  /// Lipschitz constant of the gradient measured in the dual of `n`:
  /// spectral radius for l2, max |A_ij| for l1 (dual linf), and the
  /// entrywise sum sum |A_ij| for linf (dual l1; exact for diagonal A,
  /// an upper bound otherwise).
  double gradient_lipschitz(Norm n) const {
    switch (n) {
      case Norm::l2:
        if (!lipschitz_) {
          throw UsageError("objective has no Lipschitz constant; supply objective.L or estimate it by power iteration");
        }
        return *lipschitz_;
      case Norm::l1:
        return kind_ == Kind::quadratic ? dense_.cwiseAbs().maxCoeff() : diag_.cwiseAbs().maxCoeff();
      case Norm::linf:
        return kind_ == Kind::quadratic ? dense_.cwiseAbs().sum() : diag_.cwiseAbs().sum();
    }
    return 0.0;
  }

  /// Whether A is positive semidefinite (diagonal: all entries >= 0; dense:
  /// pivoted LDL' with tolerance).
  bool is_convex() const {
    if (kind_ == Kind::diagonal_quadratic) return (diag_.array() >= 0.0).all();
    Eigen::LDLT<Matrix> ldlt(dense_);
    const double scale = std::max(1.0, dense_.cwiseAbs().maxCoeff());
    return ldlt.info() == Eigen::Success && (ldlt.vectorD().array() >= -1e-12 * scale).all();
  }

private:
  Objective(Kind kind, Matrix dense, Vector diag, Vector linear, double constant, std::optional<double> lipschitz)
      : kind_(kind),
        dense_(std::move(dense)),
        diag_(std::move(diag)),
        linear_(std::move(linear)),
        constant_(constant),
        lipschitz_(lipschitz) {}

  Vector apply(const Vector& x) const {
    if (kind_ == Kind::quadratic) return dense_ * x;
    return diag_.cwiseProduct(x);
  }

  Kind kind_;
  Matrix dense_;
  Vector diag_;
  Vector linear_;
  double constant_;
  std::optional<double> lipschitz_;
};

/// Largest relative disagreement between the analytic gradient and central
/// differences with step h, normalized by max(1, |grad_i|).
inline double finite_diff_check(const Objective& obj, const Vector& x, double h) {
  if (!(h > 0.0)) throw UsageError("finite_diff_check: step must be positive");
  const Vector g = obj.gradient(x);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vector plus = x, minus = x;
    plus[i] += h;
    minus[i] -= h;
    const double fd = (obj.value(plus) - obj.value(minus)) / (2.0 * h);
    worst = std::max(worst, std::abs(fd - g[i]) / std::max(1.0, std::abs(g[i])));
  }
  return worst;
}

enum class CurvatureMethod { analytic_lipschitz_bound, sampled, exact_quadratic_vertexpair };

inline std::string_view to_string(CurvatureMethod m) {
  switch (m) {
    case CurvatureMethod::analytic_lipschitz_bound: return "analytic_lipschitz_bound";
    case CurvatureMethod::sampled: return "sampled";
    case CurvatureMethod::exact_quadratic_vertexpair: return "exact_quadratic_vertexpair";
  }
  return "?";
}

struct CurvatureEstimate {
  double value;
  CurvatureMethod method;
  std::size_t samples_used;
};

/// Upper bound C_f <= L * diam(M)^2 with L measured in the dual norm.
inline CurvatureEstimate curvature_lipschitz_bound(const Objective& obj, const Domain& domain, Norm n = Norm::l2) {
  if (obj.dim() != domain.dim()) throw UsageError("curvature bound: objective and domain dimensions differ");
  const double diam = domain.diameter(n);
  return {obj.gradient_lipschitz(n) * diam * diam, CurvatureMethod::analytic_lipschitz_bound, 0};
}

/// Lower estimate of C_f: the largest value of
/// (2/g^2)(f(y) - f(x) - <grad f(x), y - x>), y = x + g(s - x), over n
/// random triples (x, s, g). Never below zero (s = x is admissible).
inline CurvatureEstimate curvature_sampled(const Objective& obj, const Domain& domain, std::size_t n,
                                           std::uint64_t seed) {
  if (n < 1) throw UsageError("curvature_sampled: need at least one sample");
  if (obj.dim() != domain.dim()) throw UsageError("curvature_sampled: objective and domain dimensions differ");
  Rng rng(seed);
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vector x = sample_point(domain, rng);
    const Vector s = sample_point(domain, rng);
    const double step = sample_step(rng);
    const Vector y = x + step * (s - x);
    best = std::max(best, 2.0 / (step * step) * obj.linearization_error(x, y));
  }
  return {best, CurvatureMethod::sampled, n};
}

/// Exact C_f = sup_{x,s in M} (s-x)'A(s-x) where it is available in closed
/// form: diagonal objectives on boxes (separable, any sign pattern), and
/// convex objectives on vertex-listable domains (the maximum of a convex
/// function over M x M is attained at a vertex pair).
inline CurvatureEstimate curvature_exact(const Objective& obj, const Domain& domain) {
  if (obj.dim() != domain.dim()) throw UsageError("curvature_exact: objective and domain dimensions differ");
  if (obj.kind() == Objective::Kind::diagonal_quadratic) {
    if (const auto* box = std::get_if<Domain::Box>(&domain.kind())) {
      const Vector width = box->hi - box->lo;
      return {obj.diag().cwiseMax(0.0).dot(width.cwiseProduct(width)), CurvatureMethod::exact_quadratic_vertexpair, 0};
    }
  }
  if (!obj.is_convex()) {
    throw UnsupportedError("curvature_exact: closed form needs a convex objective or a diagonal objective on a box");
  }
  const auto verts = domain.vertices();
  double best = 0.0;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    for (std::size_t j = i + 1; j < verts.size(); ++j) best = std::max(best, obj.curvature_along(verts[j] - verts[i]));
  }
  return {best, CurvatureMethod::exact_quadratic_vertexpair, 0};
}

struct MinimumResult {
  double min_value;
  Vector argmin;
};

/// Exact global minimum of a diagonal quadratic over a box, coordinate by
/// coordinate. Candidates are scanned lo, hi, then the interior critical
/// point; the first strict improvement wins, so ties go to lo.
inline MinimumResult global_min_separable_box(const Objective& obj, const Domain& domain) {
  if (obj.kind() != Objective::Kind::diagonal_quadratic) {
    throw UsageError("global_min_separable_box: objective must be a diagonal quadratic");
  }
  const auto* box = std::get_if<Domain::Box>(&domain.kind());
  if (box == nullptr) throw UsageError("global_min_separable_box: domain must be a box");
  if (obj.dim() != domain.dim()) throw UsageError("global_min_separable_box: dimension mismatch");

  Vector argmin(obj.dim());
  for (Eigen::Index i = 0; i < obj.dim(); ++i) {
    const double a = obj.diag()[i], b = obj.linear()[i];
    auto phi = [&](double t) { return 0.5 * a * t * t + b * t; };
    double best_t = box->lo[i];
    double best = phi(best_t);
    if (phi(box->hi[i]) < best) {
      best_t = box->hi[i];
      best = phi(best_t);
    }
    if (a > 0.0) {
      const double t = -b / a;
      if (t > box->lo[i] && t < box->hi[i] && phi(t) < best) best_t = t;
    }
    argmin[i] = best_t;
  }
  return {obj.value(argmin), std::move(argmin)};
}

/// Brute-force minimum over a regular grid of feasible points (product grid
/// for boxes, the box [-r, r]^d filtered for l1 balls, barycentric grid for
/// the simplex). Only an upper bound on the true minimum. Dimension <= 3.
inline MinimumResult grid_min(const Objective& obj, const Domain& domain, std::size_t resolution) {
  const Eigen::Index d = domain.dim();
  if (d > 3) throw UnsupportedError("grid_min: dimension " + std::to_string(d) + " > 3");
  if (resolution < 2) throw UsageError("grid_min: resolution must be >= 2");
  if (obj.dim() != d) throw UsageError("grid_min: dimension mismatch");

  std::optional<MinimumResult> best;
  auto consider = [&](const Vector& x) {
    const double v = obj.value(x);
    if (!best || v < best->min_value) best = MinimumResult{v, x};
  };

  Vector lo, hi;
  bool simplex = false;
  bool l1 = false;
  double radius = 0.0;
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Domain::Box>) {
          lo = k.lo;
          hi = k.hi;
        } else if constexpr (std::is_same_v<K, Domain::Simplex>) {
          simplex = true;
        } else if constexpr (std::is_same_v<K, Domain::L1Ball>) {
          l1 = true;
          radius = k.radius;
          lo = Vector::Constant(d, -k.radius);
          hi = Vector::Constant(d, k.radius);
        } else {
          throw UnsupportedError("grid_min: vertex-list domains are not gridded");
        }
      },
      domain.kind());

  const std::size_t steps = resolution - 1;
  std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
  while (true) {
    if (simplex) {
      std::size_t used = 0;
      for (Eigen::Index i = 0; i + 1 < d; ++i) used += idx[static_cast<std::size_t>(i)];
      if (used <= steps) {
        Vector x(d);
        for (Eigen::Index i = 0; i + 1 < d; ++i) {
          x[i] = static_cast<double>(idx[static_cast<std::size_t>(i)]) / static_cast<double>(steps);
        }
        x[d - 1] = static_cast<double>(steps - used) / static_cast<double>(steps);
        consider(x);
      }
    } else {
      Vector x(d);
      for (Eigen::Index i = 0; i < d; ++i) {
        const double frac = static_cast<double>(idx[static_cast<std::size_t>(i)]) / static_cast<double>(steps);
        x[i] = idx[static_cast<std::size_t>(i)] == steps ? hi[i] : lo[i] + frac * (hi[i] - lo[i]);
      }
      if (!l1 || x.lpNorm<1>() <= radius) consider(x);
    }
    // Odometer increment; the simplex grid only varies the first d-1 slots.
    const std::size_t free_dims = static_cast<std::size_t>(simplex ? d - 1 : d);
    std::size_t pos = 0;
    while (pos < free_dims) {
      if (++idx[pos] <= steps) break;
      idx[pos] = 0;
      ++pos;
    }
    if (pos >= free_dims) break;
  }
  if (!best) throw UsageError("grid_min: no feasible grid point at this resolution");
  return std::move(*best);
}

}  // namespace fwnc
