#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstddef>
#include <string>

#include "fwnc/errors.hpp"

namespace fwnc {

/// Dense point type for iterates, gradients, atoms and directions.
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline bool all_finite(const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) return false;
  }
  return true;
}

inline void require_same_dim(const Vector& a, Eigen::Index d, const char* what) {
  if (a.size() != d) {
    throw UsageError(std::string(what) + ": dimension mismatch (got " + std::to_string(a.size()) +
                     ", expected " + std::to_string(d) + ")");
  }
}

inline Vector unit_vector(Eigen::Index d, Eigen::Index i, double scale = 1.0) {
  Vector e = Vector::Zero(d);
  e[i] = scale;
  return e;
}

}  // namespace fwnc
