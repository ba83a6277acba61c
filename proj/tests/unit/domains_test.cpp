#include <gtest/gtest.h>

#include <cmath>
#include <cstring>

#include "fwnc/domains.hpp"
#include "test_util.hpp"

namespace fwnc {
namespace {

using testing::brute_force_argmin;
using testing::domain_zoo;
using testing::random_vector;

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

TEST(Lmo, SimplexSmallestEntryWins) { EXPECT_EQ(Domain::simplex(3).lmo(vec({3, 1, 2})), vec({0, 1, 0})); }

TEST(Lmo, BoxCoordinateSignRule) {
  EXPECT_EQ(Domain::box(vec({-1, -1}), vec({1, 1})).lmo(vec({1, -2})), vec({-1, 1}));
}

TEST(Lmo, L1BallLargestMagnitudeAxis) { EXPECT_EQ(Domain::l1_ball(2.0, 2).lmo(vec({3, -4})), vec({0, 2})); }

TEST(Lmo, AtomSetMatchesExhaustiveScan) {
  const Domain atoms = Domain::atoms({vec({0, 0}), vec({1, 0}), vec({0, 1})});
  const auto verts = atoms.vertices();
  Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    const Vector c = random_vector(2, rng);
    EXPECT_EQ(atoms.lmo(c), verts[brute_force_argmin(verts, c).first]);
  }
}

TEST(Lmo, TieBreaking) {
  EXPECT_EQ(Domain::simplex(4).lmo(vec({1, 1, 0.5, 0.5})), vec({0, 0, 1, 0}));
  EXPECT_EQ(Domain::box(vec({-1, -2}), vec({1, 2})).lmo(vec({0, 0})), vec({-1, -2}));
  EXPECT_EQ(Domain::l1_ball(1.0, 3).lmo(vec({0.5, -2, 2})), vec({0, 1, 0}));
  EXPECT_EQ(Domain::l1_ball(1.0, 2).lmo(vec({0, 0})), vec({-1, 0}));
  const Domain atoms = Domain::atoms({vec({1, 1}), vec({0, 0}), vec({0, 0})});
  EXPECT_EQ(atoms.lmo(vec({1, 1})), vec({0, 0}));
}

TEST(Lmo, DimensionMismatch) { EXPECT_THROW(Domain::simplex(3).lmo(vec({1, 2})), UsageError); }

// 1000 random costs per kind: exact agreement with a brute-force scan over
// the enumerated vertices, the output is an extreme point, no random
// feasible point beats it, and repeated calls are bit-identical.
TEST(Lmo, OracleProperties) {
  Rng rng(77);
  for (Eigen::Index d : {2, 3, 5}) {
    for (const auto& domain : domain_zoo(d, rng)) {
      const auto verts = domain.vertices();
      for (int trial = 0; trial < 1000; ++trial) {
        const Vector c = random_vector(d, rng, -3.0, 3.0);
        const Vector s = domain.lmo(c);
        ASSERT_EQ(s, verts[brute_force_argmin(verts, c).first]) << domain.kind_name();
        ASSERT_TRUE(domain.is_vertex(s));
        const Vector again = domain.lmo(c);
        ASSERT_EQ(std::memcmp(s.data(), again.data(), sizeof(double) * static_cast<std::size_t>(d)), 0);
        const double sc = s.dot(c);
        for (int k = 0; k < 100; ++k) {
          ASSERT_LE(sc, sample_point(domain, rng).dot(c) + 1e-12) << domain.kind_name();
        }
      }
    }
  }
}

TEST(Contains, SimplexExamples) {
  EXPECT_TRUE(Domain::simplex(2).contains(vec({0.5, 0.5}), 0.0));
  EXPECT_FALSE(Domain::simplex(2).contains(vec({0.5, 0.6}), 1e-9));
  EXPECT_FALSE(Domain::simplex(2).contains(vec({-0.1, 1.1}), 1e-9));
  EXPECT_TRUE(Domain::simplex(2).contains(vec({-1e-10, 1.0 + 1e-10}), 1e-9));
}

TEST(Contains, BoxAndBall) {
  const Domain box = Domain::box(vec({-1, 0}), vec({1, 2}));
  EXPECT_TRUE(box.contains(vec({1, 2}), 0.0));
  EXPECT_FALSE(box.contains(vec({1.1, 1}), 1e-9));
  const Domain ball = Domain::l1_ball(1.0, 2);
  EXPECT_TRUE(ball.contains(vec({0.5, -0.5}), 0.0));
  EXPECT_FALSE(ball.contains(vec({0.6, -0.5}), 1e-9));
}

TEST(Contains, NegativeToleranceRejected) { EXPECT_THROW(Domain::simplex(2).contains(vec({1, 0}), -1.0), UsageError); }

TEST(Contains, HullMembershipLowDimension) {
  Rng rng(5);
  for (Eigen::Index d : {1, 2, 3}) {
    for (int rep = 0; rep < 5; ++rep) {
      const Domain atoms = testing::random_atoms(7, d, rng);
      const auto verts = atoms.vertices();
      for (int i = 0; i < 200; ++i) {
        // Random convex combinations are inside.
        std::exponential_distribution<double> e(1.0);
        Vector w(7);
        for (int k = 0; k < 7; ++k) w[k] = e(rng);
        w /= w.sum();
        Vector x = Vector::Zero(d);
        for (int k = 0; k < 7; ++k) x += w[k] * verts[static_cast<std::size_t>(k)];
        ASSERT_TRUE(atoms.contains(x, 1e-9));
      }
      // A point beyond the farthest vertex along a direction is outside.
      const Vector dir = random_vector(d, rng).normalized();
      double reach = -INFINITY;
      for (const auto& v : verts) reach = std::max(reach, v.dot(dir));
      EXPECT_FALSE(atoms.contains(dir * (reach + 0.01), 1e-9));
    }
  }
}

TEST(Contains, DegenerateHulls) {
  const Domain segment = Domain::atoms({vec({0, 0}), vec({1, 1}), vec({2, 2})});
  EXPECT_TRUE(segment.contains(vec({1.5, 1.5}), 1e-9));
  EXPECT_FALSE(segment.contains(vec({1.5, 1.4}), 1e-9));
  EXPECT_FALSE(segment.contains(vec({2.1, 2.1}), 1e-9));
  const Domain triangle3d = Domain::atoms({vec({0, 0, 0}), vec({1, 0, 0}), vec({0, 1, 0})});
  EXPECT_TRUE(triangle3d.contains(vec({0.2, 0.2, 0}), 1e-9));
  EXPECT_FALSE(triangle3d.contains(vec({0.2, 0.2, 0.1}), 1e-9));
  EXPECT_FALSE(triangle3d.contains(vec({0.6, 0.6, 0}), 1e-9));
  const Domain point = Domain::atoms({vec({1, 2})});
  EXPECT_TRUE(point.contains(vec({1, 2}), 0.0));
  EXPECT_FALSE(point.contains(vec({1, 2.1}), 1e-9));
}

TEST(Contains, HullAboveThreeDimensionsUnsupported) {
  Rng rng(1);
  const Domain atoms = testing::random_atoms(5, 4, rng);
  EXPECT_FALSE(atoms.membership_supported());
  EXPECT_THROW(atoms.contains(Vector::Zero(4), 1e-9), UnsupportedError);
}

TEST(Diameter, ClosedForms) {
  EXPECT_DOUBLE_EQ(Domain::simplex(3).diameter(Norm::l2), std::sqrt(2.0));
  EXPECT_NEAR(Domain::simplex(3).diameter(Norm::l2), 1.41421356, 1e-8);
  EXPECT_EQ(Domain::simplex(3).diameter(Norm::l1), 2.0);
  EXPECT_EQ(Domain::simplex(3).diameter(Norm::linf), 1.0);
  EXPECT_EQ(Domain::simplex(1).diameter(Norm::l2), 0.0);
  const Domain box = Domain::box(vec({-1, -1}), vec({1, 1}));
  EXPECT_DOUBLE_EQ(box.diameter(Norm::l2), 2.0 * std::sqrt(2.0));
  EXPECT_EQ(box.diameter(Norm::l1), 4.0);
  EXPECT_EQ(box.diameter(Norm::linf), 2.0);
  for (Norm n : {Norm::l1, Norm::l2, Norm::linf}) EXPECT_EQ(Domain::l1_ball(1.5, 4).diameter(n), 3.0);
}

TEST(Diameter, AtomSetEqualsPairwiseScan) {
  Rng rng(9);
  for (int rep = 0; rep < 20; ++rep) {
    const Domain atoms = testing::random_atoms(5, 3, rng);
    const auto v = atoms.vertices();
    for (Norm n : {Norm::l1, Norm::l2, Norm::linf}) {
      double best = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) {
        for (std::size_t j = 0; j < v.size(); ++j) best = std::max(best, norm_of(v[i] - v[j], n));
      }
      EXPECT_EQ(atoms.diameter(n), best);
    }
  }
}

// The enumerated vertices of every kind attain the closed-form diameters.
TEST(Diameter, ClosedFormsAgreeWithVertexScan) {
  Rng rng(13);
  for (const auto& domain : domain_zoo(4, rng)) {
    const auto v = domain.vertices();
    for (Norm n : {Norm::l1, Norm::l2, Norm::linf}) {
      double best = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) {
        for (std::size_t j = i + 1; j < v.size(); ++j) best = std::max(best, norm_of(v[i] - v[j], n));
      }
      EXPECT_NEAR(domain.diameter(n), best, 1e-12) << domain.kind_name() << " " << to_string(n);
    }
  }
}

TEST(DomainConstruction, RejectsInvalidSets) {
  EXPECT_THROW(Domain::box(vec({0, 1}), vec({1, 1})), UsageError);
  EXPECT_THROW(Domain::box(vec({0}), vec({1, 1})), UsageError);
  EXPECT_THROW(Domain::l1_ball(0.0, 2), UsageError);
  EXPECT_THROW(Domain::l1_ball(-1.0, 2), UsageError);
  EXPECT_THROW(Domain::atoms({}), UsageError);
  EXPECT_THROW(Domain::atoms({vec({0, 0}), vec({1})}), UsageError);
  EXPECT_THROW(Domain::simplex(0), UsageError);
  EXPECT_THROW(norm_from_string("l3"), UsageError);
}

TEST(DomainConstruction, DefaultStartIsFirstVertex) {
  EXPECT_EQ(Domain::simplex(3).default_start(), vec({1, 0, 0}));
  EXPECT_EQ(Domain::box(vec({-1, -2}), vec({1, 2})).default_start(), vec({-1, -2}));
  EXPECT_EQ(Domain::l1_ball(2.0, 2).default_start(), Domain::l1_ball(2.0, 2).vertices().front());
}

TEST(Sampling, PointsAreFeasible) {
  Rng rng(21);
  for (const auto& domain : domain_zoo(3, rng)) {
    for (int i = 0; i < 500; ++i) ASSERT_TRUE(domain.contains(sample_point(domain, rng), 1e-9)) << domain.kind_name();
  }
}

}  // namespace
}  // namespace fwnc
