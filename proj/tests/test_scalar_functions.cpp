#include <gtest/gtest.h>

#include <cmath>

#include "sgop/errors.hpp"
#include "sgop/scalar_functions.hpp"
#include "test_util.hpp"
#include "verify/oracles.hpp"

namespace sgop {
namespace {

using test::kNorth;
using test::north_cone;
using test::planar;

TEST(OrientedDistance, Halfline) {
  EXPECT_EQ(oriented_distance_halfline(0.0), 0.0);
  EXPECT_EQ(oriented_distance_halfline(1.0), -1.0);
  EXPECT_EQ(oriented_distance_halfline(-2.0), 2.0);
}

TEST(OrientedDistance, Orthant) {
  EXPECT_DOUBLE_EQ(oriented_distance_orthant(Eigen::VectorXd(Eigen::Vector2d(2, 3))), -2.0);
  EXPECT_DOUBLE_EQ(oriented_distance_orthant(Eigen::VectorXd(Eigen::Vector2d(-3, -4))), 5.0);
  EXPECT_DOUBLE_EQ(oriented_distance_orthant(Eigen::VectorXd(Eigen::Vector2d(0, 7))), 0.0);
  const Eigen::VectorXd v = Eigen::Vector3d(0.4, -1.5, 2.0);
  EXPECT_NEAR(oriented_distance_orthant(v), verify::orthant_oriented_distance(v), 1e-12);
}

TEST(OrientedDistance, Sector) {
  const auto cone = north_cone(0, 90);
  EXPECT_NEAR(oriented_distance_sector(cone, cone.gen_a()), 0.0, 1e-15);
  EXPECT_NEAR(oriented_distance_sector(cone, cone.bisector()), -std::sin(std::numbers::pi / 4), 1e-12);
  const TangentVectord out = -cone.bisector();
  EXPECT_NEAR(oriented_distance_sector(cone, out), 1.0, 1e-12);
  EXPECT_NEAR(oriented_distance_sector(cone, out), verify::dense_oriented_distance(cone, out), 1e-3);
  const TangentVectord side(kNorth, 2.0 * planar(120));
  EXPECT_NEAR(oriented_distance_sector(cone, side), 2.0 * std::sin(30 * std::numbers::pi / 180), 1e-12);
}

TEST(Gerstewitz, Examples) {
  const OrthantParams<double> q2(Eigen::VectorXd(Eigen::Vector2d(-1, -1)));
  EXPECT_EQ(gerstewitz(Eigen::VectorXd(Eigen::VectorXd::Zero(2)), q2), 0.0);
  EXPECT_DOUBLE_EQ(gerstewitz(Eigen::VectorXd(Eigen::Vector2d(2, 3)), q2), -2.0);
  const OrthantParams<double> q(Eigen::VectorXd(Eigen::Vector2d(-1, -2)));
  EXPECT_DOUBLE_EQ(gerstewitz(Eigen::VectorXd(Eigen::Vector2d(1, -1)), q), 0.5);
  EXPECT_NEAR(gerstewitz(Eigen::VectorXd(Eigen::Vector2d(1, -1)), q),
              verify::bisection_gerstewitz(Eigen::Vector2d(1, -1), Eigen::Vector2d(-1, -2)), 1e-10);
}

TEST(Gerstewitz, Preconditions) {
  EXPECT_THROW(OrthantParams<double>(Eigen::VectorXd(Eigen::Vector2d(-1, 0))), PreconditionError);
  const OrthantParams<double> q(Eigen::VectorXd(Eigen::Vector2d(-1, -1)));
  EXPECT_THROW(gerstewitz(Eigen::VectorXd(Eigen::Vector3d(1, 1, 1)), q), DimensionMismatchError);
}

}  // namespace
}  // namespace sgop
