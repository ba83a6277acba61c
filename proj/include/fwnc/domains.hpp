#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "fwnc/errors.hpp"
#include "fwnc/vector.hpp"

namespace fwnc {

enum class Norm { l1, l2, linf };

inline std::string_view to_string(Norm n) {
  switch (n) {
    case Norm::l1: return "l1";
    case Norm::l2: return "l2";
    case Norm::linf: return "linf";
  }
  return "?";
}

inline Norm norm_from_string(std::string_view s) {
  if (s == "l1") return Norm::l1;
  if (s == "l2") return Norm::l2;
  if (s == "linf") return Norm::linf;
  throw UsageError("unknown norm '" + std::string(s) + "' (expected l1, l2 or linf)");
}

inline double norm_of(const Vector& v, Norm n) {
  switch (n) {
    case Norm::l1: return v.lpNorm<1>();
    case Norm::l2: return v.norm();
    case Norm::linf: return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>();
  }
  return 0.0;
}

namespace detail {

// Membership in conv(points) for ambient dimension <= 3. The points are
// projected onto their affine hull; inside the hull every supporting
// hyperplane through k affinely independent points is enumerated, which
// includes every facet of the (full-dimensional, in the hull) polytope.
inline bool hull_contains(const std::vector<Vector>& points, const Vector& x, double tol) {
  const Eigen::Index d = x.size();
  if (d > 3) {
    throw UnsupportedError("convex hull membership is only decided for dimension <= 3 (got " +
                           std::to_string(d) + ")");
  }
  const Vector& origin = points.front();
  const std::size_t n = points.size();
  if (n == 1) return (x - origin).norm() <= tol;

  Matrix diffs(d, static_cast<Eigen::Index>(n - 1));
  for (std::size_t i = 1; i < n; ++i) diffs.col(static_cast<Eigen::Index>(i - 1)) = points[i] - origin;
  Eigen::JacobiSVD<Matrix> svd(diffs, Eigen::ComputeFullU);
  const Vector& sv = svd.singularValues();
  const double sv_tol = 1e-12 * std::max(1.0, sv.size() > 0 ? sv[0] : 0.0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > sv_tol) ++rank;
  }
  const Matrix basis = svd.matrixU().leftCols(rank);
  const Vector rel = x - origin;
  const Vector in_plane = basis.transpose() * rel;
  if ((rel - basis * in_plane).norm() > tol) return false;
  if (rank == 0) return true;

  std::vector<Vector> proj;
  proj.reserve(n);
  double scale = 1.0;
  for (const auto& p : points) {
    proj.push_back(basis.transpose() * (p - origin));
    scale = std::max(scale, proj.back().lpNorm<Eigen::Infinity>());
  }
  const double side_tol = 1e-12 * scale;

  if (rank == 1) {
    double lo = proj[0][0], hi = proj[0][0];
    for (const auto& p : proj) {
      lo = std::min(lo, p[0]);
      hi = std::max(hi, p[0]);
    }
    return in_plane[0] >= lo - tol && in_plane[0] <= hi + tol;
  }

  auto test_plane = [&](Vector normal, double offset) -> bool {
    // Returns false when the plane supports the hull and x is strictly outside it.
    bool all_below = true, all_above = true;
    for (const auto& p : proj) {
      const double s = normal.dot(p) - offset;
      if (s > side_tol) all_below = false;
      if (s < -side_tol) all_above = false;
    }
    if (all_above) {
      normal = -normal;
      offset = -offset;
    } else if (!all_below) {
      return true;
    }
    return normal.dot(in_plane) - offset <= tol;
  };

  if (rank == 2) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const Vector e = proj[j] - proj[i];
        Vector normal(2);
        normal << -e[1], e[0];
        const double len = normal.norm();
        if (len <= side_tol) continue;
        normal /= len;
        if (!test_plane(normal, normal.dot(proj[i]))) return false;
      }
    }
    return true;
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        const Eigen::Vector3d a = proj[j] - proj[i];
        const Eigen::Vector3d b = proj[k] - proj[i];
        Vector normal = a.cross(b);
        const double len = normal.norm();
        if (len <= side_tol) continue;
        normal /= len;
        if (!test_plane(normal, normal.dot(proj[i]))) return false;
      }
    }
  }
  return true;
}

}  // namespace detail

/// Compact convex feasible set with a linear minimization oracle.
///
/// Supported kinds are the unit probability simplex, axis-aligned boxes,
/// l1 balls centred at the origin, and the convex hull of an explicit vertex
/// list. Values are immutable once constructed; all queries are pure.
///
/// Oracle ties are broken deterministically: lowest coordinate index for the
/// simplex and l1 ball, `lo_i` whenever `c_i >= 0` for the box, and lowest
/// list position for vertex lists.
class Domain {
public:
  struct Simplex {
    Eigen::Index dim;
  };
  struct Box {
    Vector lo;
    Vector hi;
  };
  struct L1Ball {
    double radius;
    Eigen::Index dim;
  };
  struct AtomSet {
    std::vector<Vector> vertices;
  };
  using Kind = std::variant<Simplex, Box, L1Ball, AtomSet>;

  static Domain simplex(Eigen::Index d) {
    if (d < 1) throw UsageError("simplex: dimension must be >= 1");
    return Domain(Simplex{d});
  }

  static Domain box(Vector lo, Vector hi) {
    if (lo.size() < 1) throw UsageError("box: dimension must be >= 1");
    if (lo.size() != hi.size()) throw UsageError("box: lo and hi have different dimensions");
    if (!all_finite(lo) || !all_finite(hi)) throw UsageError("box: bounds must be finite");
    for (Eigen::Index i = 0; i < lo.size(); ++i) {
      if (!(lo[i] < hi[i])) {
        throw UsageError("box: coordinate " + std::to_string(i) + " has lo >= hi (degenerate or empty)");
      }
    }
    return Domain(Box{std::move(lo), std::move(hi)});
  }

  static Domain l1_ball(double radius, Eigen::Index d) {
    if (d < 1) throw UsageError("l1 ball: dimension must be >= 1");
    if (!(radius > 0.0) || !std::isfinite(radius)) throw UsageError("l1 ball: radius must be positive and finite");
    return Domain(L1Ball{radius, d});
  }

  static Domain atoms(std::vector<Vector> vertices) {
    if (vertices.empty()) throw UsageError("atom set: at least one vertex required");
    const Eigen::Index d = vertices.front().size();
    if (d < 1) throw UsageError("atom set: dimension must be >= 1");
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      if (vertices[i].size() != d) {
        throw UsageError("atom set: vertex " + std::to_string(i) + " has dimension " +
                         std::to_string(vertices[i].size()) + ", expected " + std::to_string(d));
      }
      if (!all_finite(vertices[i])) throw UsageError("atom set: vertex " + std::to_string(i) + " is not finite");
    }
    return Domain(AtomSet{std::move(vertices)});
  }

  const Kind& kind() const noexcept { return kind_; }

  std::string_view kind_name() const {
    return std::visit(
        [](const auto& k) -> std::string_view {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, Simplex>) return "simplex";
          else if constexpr (std::is_same_v<K, Box>) return "box";
          else if constexpr (std::is_same_v<K, L1Ball>) return "l1ball";
          else return "atoms";
        },
        kind_);
  }

  Eigen::Index dim() const {
    return std::visit(
        [](const auto& k) -> Eigen::Index {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, Simplex> || std::is_same_v<K, L1Ball>) return k.dim;
          else if constexpr (std::is_same_v<K, Box>) return k.lo.size();
          else return k.vertices.front().size();
        },
        kind_);
  }

  /// argmin over the set of <s, c>; always an extreme point.
  Vector lmo(const Vector& c) const {
    require_same_dim(c, dim(), "lmo");
    return std::visit(
        [&](const auto& k) -> Vector {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, Simplex>) {
            Eigen::Index best = 0;
            for (Eigen::Index i = 1; i < c.size(); ++i) {
              if (c[i] < c[best]) best = i;
            }
            return unit_vector(k.dim, best);
          } else if constexpr (std::is_same_v<K, Box>) {
            Vector s(c.size());
            for (Eigen::Index i = 0; i < c.size(); ++i) s[i] = c[i] >= 0.0 ? k.lo[i] : k.hi[i];
            return s;
          } else if constexpr (std::is_same_v<K, L1Ball>) {
            Eigen::Index best = 0;
            for (Eigen::Index i = 1; i < c.size(); ++i) {
              if (std::abs(c[i]) > std::abs(c[best])) best = i;
            }
            return unit_vector(k.dim, best, c[best] >= 0.0 ? -k.radius : k.radius);
          } else {
            std::size_t best = 0;
            double best_val = k.vertices[0].dot(c);
            for (std::size_t i = 1; i < k.vertices.size(); ++i) {
              const double v = k.vertices[i].dot(c);
              if (v < best_val) {
                best_val = v;
                best = i;
              }
            }
            return k.vertices[best];
          }
        },
        kind_);
  }

  /// Description of the first constraint x violates beyond `tol`, if any.
  std::optional<std::string> violation(const Vector& x, double tol) const {
    if (tol < 0.0) throw UsageError("contains: tolerance must be >= 0");
    require_same_dim(x, dim(), "contains");
    if (!all_finite(x)) return std::string("point has non-finite coordinates");
    return std::visit(
        [&](const auto& k) -> std::optional<std::string> {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, Simplex>) {
            for (Eigen::Index i = 0; i < x.size(); ++i) {
              if (x[i] < -tol) return "simplex nonnegativity violated at coordinate " + std::to_string(i);
            }
            if (std::abs(x.sum() - 1.0) > tol) return std::string("simplex sum-to-one violated");
            return std::nullopt;
          } else if constexpr (std::is_same_v<K, Box>) {
            for (Eigen::Index i = 0; i < x.size(); ++i) {
              if (x[i] < k.lo[i] - tol) return "box lower bound violated at coordinate " + std::to_string(i);
              if (x[i] > k.hi[i] + tol) return "box upper bound violated at coordinate " + std::to_string(i);
            }
            return std::nullopt;
          } else if constexpr (std::is_same_v<K, L1Ball>) {
            if (x.lpNorm<1>() > k.radius + tol) return std::string("l1 ball radius constraint violated");
            return std::nullopt;
          } else {
            if (!detail::hull_contains(k.vertices, x, tol)) return std::string("point outside convex hull of atoms");
            return std::nullopt;
          }
        },
        kind_);
  }

  bool contains(const Vector& x, double tol) const { return !violation(x, tol).has_value(); }

  /// Whether `contains` can answer for this domain without throwing.
  bool membership_supported() const {
    return !std::holds_alternative<AtomSet>(kind_) || dim() <= 3;
  }

  double diameter(Norm n) const { return diameters_[static_cast<std::size_t>(n)]; }

  /// Extreme points in the order the oracle's tie rule scans them. Boxes are
  /// enumerated with bit i of the corner index selecting hi_i.
  std::vector<Vector> vertices() const {
    return std::visit(
        [&](const auto& k) -> std::vector<Vector> {
          using K = std::decay_t<decltype(k)>;
          std::vector<Vector> out;
          if constexpr (std::is_same_v<K, Simplex>) {
            for (Eigen::Index i = 0; i < k.dim; ++i) out.push_back(unit_vector(k.dim, i));
          } else if constexpr (std::is_same_v<K, Box>) {
            const Eigen::Index d = k.lo.size();
            if (d > 20) throw UnsupportedError("box vertex enumeration limited to dimension <= 20");
            for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
              Vector v = k.lo;
              for (Eigen::Index i = 0; i < d; ++i) {
                if (mask & (std::size_t{1} << i)) v[i] = k.hi[i];
              }
              out.push_back(std::move(v));
            }
          } else if constexpr (std::is_same_v<K, L1Ball>) {
            for (Eigen::Index i = 0; i < k.dim; ++i) {
              out.push_back(unit_vector(k.dim, i, -k.radius));
              out.push_back(unit_vector(k.dim, i, k.radius));
            }
          } else {
            out = k.vertices;
          }
          return out;
        },
        kind_);
  }

  /// Structural extreme-point test for oracle outputs. For vertex lists this
  /// checks membership in the list, which is a superset of the extreme points.
  bool is_vertex(const Vector& s) const {
    if (s.size() != dim()) return false;
    return std::visit(
        [&](const auto& k) -> bool {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, Simplex>) {
            int ones = 0;
            for (Eigen::Index i = 0; i < s.size(); ++i) {
              if (s[i] == 1.0) ++ones;
              else if (s[i] != 0.0) return false;
            }
            return ones == 1;
          } else if constexpr (std::is_same_v<K, Box>) {
            for (Eigen::Index i = 0; i < s.size(); ++i) {
              if (s[i] != k.lo[i] && s[i] != k.hi[i]) return false;
            }
            return true;
          } else if constexpr (std::is_same_v<K, L1Ball>) {
            int hits = 0;
            for (Eigen::Index i = 0; i < s.size(); ++i) {
              if (std::abs(s[i]) == k.radius) ++hits;
              else if (s[i] != 0.0) return false;
            }
            return hits == 1;
          } else {
            return std::any_of(k.vertices.begin(), k.vertices.end(), [&](const Vector& v) { return v == s; });
          }
        },
        kind_);
  }

  /// Default starting point: e_1 for the simplex, the lo corner for boxes,
  /// -r e_1 for the l1 ball, the first listed vertex otherwise.
  Vector default_start() const {
    return std::visit(
        [&](const auto& k) -> Vector {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, Simplex>) return unit_vector(k.dim, 0);
          else if constexpr (std::is_same_v<K, Box>) return k.lo;
          else if constexpr (std::is_same_v<K, L1Ball>) return unit_vector(k.dim, 0, -k.radius);
          else return k.vertices.front();
        },
        kind_);
  }

private:
  explicit Domain(Kind k) : kind_(std::move(k)) {
    for (Norm n : {Norm::l1, Norm::l2, Norm::linf}) diameters_[static_cast<std::size_t>(n)] = compute_diameter(n);
  }

  double compute_diameter(Norm n) const {
    return std::visit(
        [&](const auto& k) -> double {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, Simplex>) {
            if (k.dim == 1) return 0.0;
            switch (n) {
              case Norm::l1: return 2.0;
              case Norm::l2: return std::sqrt(2.0);
              case Norm::linf: return 1.0;
            }
            return 0.0;
          } else if constexpr (std::is_same_v<K, Box>) {
            return norm_of(k.hi - k.lo, n);
          } else if constexpr (std::is_same_v<K, L1Ball>) {
            return 2.0 * k.radius;
          } else {
            double best = 0.0;
            for (std::size_t i = 0; i < k.vertices.size(); ++i) {
              for (std::size_t j = i + 1; j < k.vertices.size(); ++j) {
                best = std::max(best, norm_of(k.vertices[i] - k.vertices[j], n));
              }
            }
            return best;
          }
        },
        kind_);
  }

  Kind kind_;
  std::array<double, 3> diameters_{};
};

}  // namespace fwnc
