#pragma once

#include <cstddef>
#include <random>
#include <variant>

#include "fwnc/domains.hpp"
#include "fwnc/vector.hpp"

namespace fwnc {

using Rng = std::mt19937_64;

namespace detail {

inline Vector dirichlet_ones(Eigen::Index k, Rng& rng) {
  std::exponential_distribution<double> expo(1.0);
  Vector w(k);
  for (Eigen::Index i = 0; i < k; ++i) w[i] = expo(rng);
  return w / w.sum();
}

}  // namespace detail

/// Random feasible point.
///
/// Simplex: Dirichlet(1, ..., 1). Box: independent uniform coordinates.
/// L1 ball: with probability 1/2 a uniformly chosen vertex, otherwise a
/// uniform interior point (Dirichlet over d+1 slots with random signs).
/// Atom set: with probability 1/2 a listed vertex, otherwise a
/// Dirichlet-weighted convex combination of all vertices.
inline Vector sample_point(const Domain& domain, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  return std::visit(
      [&](const auto& k) -> Vector {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Domain::Simplex>) {
          return detail::dirichlet_ones(k.dim, rng);
        } else if constexpr (std::is_same_v<K, Domain::Box>) {
          Vector x(k.lo.size());
          for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = k.lo[i] + (k.hi[i] - k.lo[i]) * unit(rng);
          return x;
        } else if constexpr (std::is_same_v<K, Domain::L1Ball>) {
          std::bernoulli_distribution coin(0.5);
          if (coin(rng)) {
            std::uniform_int_distribution<Eigen::Index> axis(0, k.dim - 1);
            const Eigen::Index i = axis(rng);
            return unit_vector(k.dim, i, coin(rng) ? k.radius : -k.radius);
          }
          const Vector w = detail::dirichlet_ones(k.dim + 1, rng);
          Vector x(k.dim);
          for (Eigen::Index i = 0; i < k.dim; ++i) x[i] = (coin(rng) ? 1.0 : -1.0) * k.radius * w[i];
          return x;
        } else {
          std::bernoulli_distribution coin(0.5);
          const auto n = static_cast<Eigen::Index>(k.vertices.size());
          if (coin(rng)) {
            std::uniform_int_distribution<std::size_t> pick(0, k.vertices.size() - 1);
            return k.vertices[pick(rng)];
          }
          const Vector w = detail::dirichlet_ones(n, rng);
          Vector x = Vector::Zero(k.vertices.front().size());
          for (Eigen::Index i = 0; i < n; ++i) x += w[i] * k.vertices[static_cast<std::size_t>(i)];
          return x;
        }
      },
      domain.kind());
}

/// Step size uniform on (0, 1].
inline double sample_step(Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  return 1.0 - unit(rng);
}

}  // namespace fwnc
