#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <cmath>

#include "fwnc/objectives.hpp"
#include "test_util.hpp"

namespace fwnc {
namespace {

using testing::domain_zoo;
using testing::naive_quadratic;
using testing::random_symmetric;
using testing::random_vector;

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

Objective random_objective(Eigen::Index d, Rng& rng, bool diagonal) {
  if (diagonal) return Objective::diagonal(random_vector(d, rng, -3, 3), random_vector(d, rng));
  return Objective::quadratic(random_symmetric(d, rng, 2.0), random_vector(d, rng))
      .with_estimated_lipschitz(static_cast<std::uint64_t>(d));
}

TEST(Value, Examples) {
  EXPECT_EQ(Objective::quadratic(Matrix::Identity(2, 2), Vector::Zero(2)).value(vec({1, 0})), 0.5);
  EXPECT_EQ(Objective::diagonal(vec({1, -1}), Vector::Zero(2)).value(vec({1, 1})), 0.0);
}

TEST(Value, MatchesNaiveDoubleLoop) {
  Rng rng(1);
  for (int rep = 0; rep < 50; ++rep) {
    const Eigen::Index d = 1 + rep % 7;
    const Matrix a = random_symmetric(d, rng);
    const Vector b = random_vector(d, rng);
    const Objective f = Objective::quadratic(a, b, 0.25);
    const Vector x = random_vector(d, rng);
    EXPECT_NEAR(f.value(x), naive_quadratic(a, b, 0.25, x), 1e-12);
    const Vector diag = random_vector(d, rng, -3, 3);
    const Objective g = Objective::diagonal(diag, b);
    EXPECT_NEAR(g.value(x), naive_quadratic(Matrix(diag.asDiagonal()), b, 0.0, x), 1e-12);
  }
}

TEST(Value, NonSymmetricInputIsSymmetrized) {
  Matrix a(2, 2);
  a << 1, 2, 0, 1;
  const Objective f = Objective::quadratic(a, Vector::Zero(2));
  EXPECT_EQ(f.hessian()(0, 1), 1.0);
  EXPECT_EQ(f.hessian()(1, 0), 1.0);
}

TEST(Value, DimensionMismatch) {
  const Objective f = Objective::diagonal(vec({1, 2}), vec({0, 0}));
  EXPECT_THROW(f.value(vec({1, 2, 3})), UsageError);
  EXPECT_THROW(f.gradient(vec({1})), UsageError);
  EXPECT_THROW(Objective::diagonal(vec({1, 2}), vec({0})), UsageError);
}

TEST(Gradient, Examples) {
  EXPECT_EQ(Objective::quadratic(Matrix::Identity(2, 2), Vector::Zero(2)).gradient(vec({1, 0})), vec({1, 0}));
  EXPECT_EQ(Objective::diagonal(vec({2, -3}), vec({1, 1})).gradient(vec({1, 1})), vec({3, -2}));
}

TEST(FiniteDiff, RandomInstancesAgree) {
  Rng rng(2);
  for (int rep = 0; rep < 100; ++rep) {
    const Eigen::Index d = 1 + rep % 10;
    const Objective f = random_objective(d, rng, rep % 2 == 0);
    EXPECT_LT(finite_diff_check(f, random_vector(d, rng, -2, 2), 1e-5), 1e-6);
  }
}

TEST(FiniteDiff, ExactOnLinearFunctions) {
  Rng rng(3);
  const Objective f = Objective::quadratic(Matrix::Zero(4, 4), random_vector(4, rng));
  EXPECT_LT(finite_diff_check(f, random_vector(4, rng), 1e-1), 1e-12);
  EXPECT_LT(finite_diff_check(f, random_vector(4, rng), 1e-5), 1e-6);
}

TEST(FiniteDiff, SecondOrderExactOnQuadratics) {
  const Objective f = Objective::quadratic(Matrix::Identity(3, 3), Vector::Zero(3));
  EXPECT_LT(finite_diff_check(f, vec({0.3, -0.7, 1.1}), 1e-1), 1e-12);
}

TEST(FiniteDiff, RejectsNonPositiveStep) {
  EXPECT_THROW(finite_diff_check(Objective::diagonal(vec({1}), vec({0})), vec({0}), 0.0), UsageError);
}

TEST(LipschitzBound, Examples) {
  const auto a = curvature_lipschitz_bound(Objective::diagonal(vec({2, -1}), Vector::Zero(2)), Domain::simplex(2));
  EXPECT_NEAR(a.value, 4.0, 1e-12);
  EXPECT_EQ(a.method, CurvatureMethod::analytic_lipschitz_bound);
  const auto b = curvature_lipschitz_bound(Objective::quadratic(Matrix::Identity(2, 2), Vector::Zero(2), 0.0, 1.0),
                                           Domain::box(vec({-1, -1}), vec({1, 1})));
  EXPECT_NEAR(b.value, 8.0, 1e-12);
}

TEST(LipschitzBound, MissingLipschitzIsUsageError) {
  const Objective f = Objective::quadratic(Matrix::Identity(2, 2), Vector::Zero(2));
  EXPECT_THROW(curvature_lipschitz_bound(f, Domain::simplex(2)), UsageError);
}

TEST(LipschitzBound, PowerIterationMatchesEigensolve) {
  Rng rng(4);
  for (int rep = 0; rep < 40; ++rep) {
    const Eigen::Index d = 2 + rep % 9;
    const Matrix a = random_symmetric(d, rng, 3.0);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(a);
    const double exact = eig.eigenvalues().cwiseAbs().maxCoeff();
    const Objective f = Objective::quadratic(a, Vector::Zero(d)).with_estimated_lipschitz(99);
    EXPECT_NEAR(*f.lipschitz(), exact, 1e-6 * exact) << "d=" << d;
    const Domain box = testing::random_box(d, rng);
    const double diam = box.diameter(Norm::l2);
    EXPECT_NEAR(curvature_lipschitz_bound(f, box).value, exact * diam * diam, 1e-6 * exact * diam * diam);
  }
}

TEST(CurvatureSampled, IdentityOnSimplexApproachesDiameterSquared) {
  const Objective f = Objective::quadratic(Matrix::Identity(2, 2), Vector::Zero(2));
  const auto est = curvature_sampled(f, Domain::simplex(2), 100000, 0);
  EXPECT_LE(est.value, 2.0 + 1e-12);
  EXPECT_GE(est.value, 1.9);
  EXPECT_EQ(est.samples_used, 100000u);
  EXPECT_EQ(est.method, CurvatureMethod::sampled);
}

TEST(CurvatureSampled, LinearFunctionHasZeroCurvature) {
  Rng rng(6);
  const Objective f = Objective::quadratic(Matrix::Zero(3, 3), random_vector(3, rng));
  for (const auto& domain : domain_zoo(3, rng)) EXPECT_EQ(curvature_sampled(f, domain, 2000, 1).value, 0.0);
}

TEST(CurvatureSampled, DeterministicGivenSeed) {
  Rng rng(7);
  const Objective f = random_objective(4, rng, false);
  const Domain box = testing::random_box(4, rng);
  EXPECT_EQ(curvature_sampled(f, box, 5000, 42).value, curvature_sampled(f, box, 5000, 42).value);
}

// Sampling only lower-bounds C_f, which the Lipschitz bound dominates in
// every norm; where a closed form exists it sits in between.
TEST(CurvatureSampled, NeverExceedsLipschitzBound) {
  Rng rng(8);
  for (int rep = 0; rep < 30; ++rep) {
    const Eigen::Index d = 2 + rep % 4;
    const Objective f = random_objective(d, rng, rep % 2 == 0);
    for (const auto& domain : domain_zoo(d, rng)) {
      const double sampled = curvature_sampled(f, domain, 3000, static_cast<std::uint64_t>(rep)).value;
      for (Norm n : {Norm::l1, Norm::l2, Norm::linf}) {
        ASSERT_LE(sampled, curvature_lipschitz_bound(f, domain, n).value + 1e-9) << domain.kind_name();
      }
    }
  }
}

TEST(CurvatureExact, SeparableBoxFormulaBracketsSamples) {
  Rng rng(10);
  for (int rep = 0; rep < 20; ++rep) {
    const Objective f = Objective::diagonal(random_vector(3, rng, -3, 3), random_vector(3, rng));
    const Domain box = testing::random_box(3, rng);
    const double exact = curvature_exact(f, box).value;
    EXPECT_LE(curvature_sampled(f, box, 5000, 3).value, exact + 1e-9);
    EXPECT_LE(exact, curvature_lipschitz_bound(f, box).value + 1e-9);
  }
}

TEST(CurvatureExact, ConvexVertexPairs) {
  const Objective f = Objective::quadratic(Matrix::Identity(3, 3), Vector::Zero(3));
  EXPECT_NEAR(curvature_exact(f, Domain::simplex(3)).value, 2.0, 1e-12);
  const Objective g = Objective::quadratic(-Matrix::Identity(3, 3), Vector::Zero(3));
  EXPECT_THROW(curvature_exact(g, Domain::simplex(3)), UnsupportedError);
}

TEST(DescentLemma, HoldsOnRandomTriples) {
  Rng rng(12);
  for (int rep = 0; rep < 20; ++rep) {
    const Eigen::Index d = 2 + rep % 5;
    const Objective f = random_objective(d, rng, rep % 2 == 1);
    for (const auto& domain : domain_zoo(d, rng)) {
      const double C = curvature_lipschitz_bound(f, domain).value;
      for (int k = 0; k < 1000; ++k) {
        const Vector x = sample_point(domain, rng);
        const Vector s = sample_point(domain, rng);
        const double g = sample_step(rng);
        const double rhs = f.value(x) + g * f.gradient(x).dot(s - x) + 0.5 * g * g * C;
        ASSERT_LE(f.value(x + g * (s - x)), rhs + 1e-9 * std::max(1.0, std::abs(rhs)));
      }
    }
  }
}

TEST(GlobalMinBox, Examples) {
  const auto a = global_min_separable_box(Objective::diagonal(vec({1, -1}), Vector::Zero(2)),
                                          Domain::box(vec({-1, -1}), vec({1, 1})));
  EXPECT_EQ(a.min_value, -0.5);
  EXPECT_EQ(a.argmin, vec({0, -1}));
  const auto b = global_min_separable_box(Objective::diagonal(vec({0, 0}), vec({1, -1})),
                                          Domain::box(vec({0, 0}), vec({1, 1})));
  EXPECT_EQ(b.min_value, -1.0);
  EXPECT_EQ(b.argmin, vec({0, 1}));
}

TEST(GlobalMinBox, MatchesDenseGrid) {
  Rng rng(14);
  const Domain box = Domain::box(vec({-1, -1}), vec({1, 1}));
  for (int rep = 0; rep < 20; ++rep) {
    const Objective f = Objective::diagonal(random_vector(2, rng, -3, 3), random_vector(2, rng));
    const auto exact = global_min_separable_box(f, box);
    const auto grid = grid_min(f, box, 2001);
    EXPECT_LE(exact.min_value, grid.min_value + 1e-12);
    EXPECT_NEAR(exact.min_value, grid.min_value, 1e-6);
  }
}

TEST(GlobalMinBox, RejectsWrongKinds) {
  EXPECT_THROW(global_min_separable_box(Objective::diagonal(vec({1, 1}), vec({0, 0})), Domain::simplex(2)),
               UsageError);
  EXPECT_THROW(global_min_separable_box(Objective::quadratic(Matrix::Identity(2, 2), vec({0, 0})),
                                        Domain::box(vec({-1, -1}), vec({1, 1}))),
               UsageError);
}

TEST(GridMin, Examples) {
  const Domain box = Domain::box(vec({-1, -1}), vec({1, 1}));
  const auto a = grid_min(Objective::quadratic(-2.0 * Matrix::Identity(2, 2), Vector::Zero(2)), box, 3);
  EXPECT_EQ(a.min_value, -2.0);
  EXPECT_EQ(a.argmin.cwiseAbs(), vec({1, 1}));
  const auto b = grid_min(Objective::quadratic(Matrix::Identity(2, 2), Vector::Zero(2)), box, 5);
  EXPECT_EQ(b.min_value, 0.0);
  EXPECT_EQ(b.argmin, vec({0, 0}));
  const auto c = grid_min(Objective::quadratic(Matrix::Identity(3, 3), Vector::Zero(3)), Domain::simplex(3), 4);
  EXPECT_NEAR(c.min_value, 1.0 / 6.0, 1e-12);
}

TEST(GridMin, UnsupportedAboveThreeDimensions) {
  EXPECT_THROW(grid_min(Objective::diagonal(Vector::Ones(4), Vector::Zero(4)), Domain::simplex(4), 5),
               UnsupportedError);
  EXPECT_THROW(grid_min(Objective::diagonal(Vector::Ones(2), Vector::Zero(2)), Domain::simplex(2), 1), UsageError);
}

// Grid minimum exceeds the exact one by at most (spacing/2) times the
// largest gradient norm over the box, scaled for the diagonal.
TEST(GridMin, AgreesWithExactOracleWithinSpacingBound) {
  Rng rng(15);
  for (int rep = 0; rep < 20; ++rep) {
    const Domain box = testing::random_box(2, rng);
    const Objective f = Objective::diagonal(random_vector(2, rng, -3, 3), random_vector(2, rng));
    const auto exact = global_min_separable_box(f, box);
    const std::size_t res = 101;
    const auto& k = std::get<Domain::Box>(box.kind());
    const Vector spacing = (k.hi - k.lo) / static_cast<double>(res - 1);
    const Vector max_grad = f.diag().cwiseAbs().cwiseProduct(k.lo.cwiseAbs().cwiseMax(k.hi.cwiseAbs())) +
                            f.linear().cwiseAbs();
    const double bound = 0.5 * spacing.dot(max_grad);
    const auto grid = grid_min(f, box, res);
    EXPECT_GE(grid.min_value, exact.min_value - 1e-12);
    EXPECT_LE(grid.min_value - exact.min_value, bound);
  }
}

TEST(Convexity, Detection) {
  EXPECT_TRUE(Objective::diagonal(vec({1, 0}), vec({0, 0})).is_convex());
  EXPECT_FALSE(Objective::diagonal(vec({1, -1e-3}), vec({0, 0})).is_convex());
  Matrix a(2, 2);
  a << 1, 2, 2, 1;
  EXPECT_FALSE(Objective::quadratic(a, vec({0, 0})).is_convex());
  EXPECT_TRUE(Objective::quadratic(Matrix::Identity(2, 2), vec({0, 0})).is_convex());
}

}  // namespace
}  // namespace fwnc
