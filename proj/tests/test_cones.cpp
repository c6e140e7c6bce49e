#include <gtest/gtest.h>

#include <numbers>

#include "sgop/cones.hpp"
#include "sgop/errors.hpp"
#include "test_util.hpp"

namespace sgop {
namespace {

using test::kNorth;
using test::north_cone;
using test::planar;

TEST(SectorCone, RejectsDegenerateApertures) {
  EXPECT_THROW(north_cone(0, 0), DegenerateError);
  EXPECT_THROW(north_cone(0, 180), DegenerateError);
  EXPECT_THROW(SectorConed(TangentVectord::Zero(kNorth), TangentVectord(kNorth, planar(10))), DegenerateError);
}

TEST(ConeContains, Examples) {
  const auto cone = north_cone(10, 70);
  EXPECT_TRUE(cone_contains(cone, TangentVectord::Zero(kNorth)));
  EXPECT_FALSE(cone_contains_strict(cone, TangentVectord::Zero(kNorth)));
  EXPECT_TRUE(cone_contains(cone, cone.gen_a()));
  EXPECT_FALSE(cone_contains(cone, -cone.bisector()));
  EXPECT_TRUE(cone_contains(cone, TangentVectord(kNorth, 3.0 * planar(40))));
  EXPECT_FALSE(cone_contains(cone, TangentVectord(kNorth, planar(75))));
}

TEST(PolarCone, RightAngleIsSelfDual) {
  const auto cone = north_cone(20, 110);
  const auto polar = polar_cone(cone);
  for (int deg = 0; deg < 360; ++deg) {
    const TangentVectord v(kNorth, planar(deg + 0.5));
    EXPECT_EQ(cone_contains(cone, v), cone_contains(polar, v)) << deg;
  }
}

TEST(PolarCone, BipolarAndNonnegativePairing) {
  const auto cone = north_cone(-30, 100);
  const auto bipolar = polar_cone(polar_cone(cone));
  EXPECT_LT((bipolar.gen_a().vec() - cone.gen_a().vec()).norm(), 1e-9);
  EXPECT_LT((bipolar.gen_b().vec() - cone.gen_b().vec()).norm(), 1e-9);
  const auto polar = polar_cone(cone);
  for (double s = 0; s <= 1; s += 0.125) {
    for (double t = 0; t <= 1; t += 0.125) {
      EXPECT_GE(sector_direction(polar, s).dot(sector_direction(cone, t)), -1e-12);
    }
  }
}

TEST(TransportCone, IdentityAndAperture) {
  const auto cone = north_cone(0, 60);
  const auto same = transport_cone(cone, kNorth);
  EXPECT_TRUE(same.gen_a().vec().isApprox(cone.gen_a().vec()));
  EXPECT_TRUE(same.gen_b().vec().isApprox(cone.gen_b().vec()));
  const auto moved = transport_cone(cone, SpherePointd(0.3, -0.4, 0.8));
  EXPECT_NEAR(moved.aperture(), cone.aperture(), 1e-9);
  const auto a = polar_cone(moved);
  const auto b = transport_cone(polar_cone(cone), moved.base());
  EXPECT_LT((a.gen_a().vec() - b.gen_a().vec()).norm(), 1e-9);
  EXPECT_LT((a.gen_b().vec() - b.gen_b().vec()).norm(), 1e-9);
}

TEST(ConeOrder, Examples) {
  const auto cone = north_cone(0, 60);
  EXPECT_FALSE(cone_order_lt(kNorth, kNorth, cone));
  EXPECT_TRUE(cone_order_lt(exp_map(0.3 * cone.gen_a()), kNorth, cone));
  EXPECT_FALSE(cone_order_lt(exp_map(-0.3 * cone.bisector()), kNorth, cone));
  EXPECT_THROW(cone_order_lt(kNorth, SpherePointd(1, 0, 0), cone), BaseMismatchError);
}

TEST(TildeCone, Examples) {
  const auto cone = north_cone(0, 60);
  EXPECT_TRUE(tilde_cone_contains(cone, kNorth));
  EXPECT_TRUE(tilde_cone_contains(cone, exp_map(0.5 * cone.gen_b())));
  EXPECT_FALSE(tilde_cone_contains(cone, exp_map(-0.5 * cone.gen_a())));
}

TEST(PickInteriorPolar, Examples) {
  const auto right = north_cone(0, 90);
  EXPECT_LT((pick_interior_polar(right).vec() - right.bisector().vec()).norm(), 1e-12);
  for (double ap : {0.3, 1.0, 2.5}) {
    const auto cone = north_cone(15, 15 + ap * 180 / std::numbers::pi);
    const auto p = pick_interior_polar(cone);
    EXPECT_GT(p.dot(cone.gen_a()), 0.0);
    EXPECT_GT(p.dot(cone.gen_b()), 0.0);
    EXPECT_LT(std::abs(p.vec().dot(kNorth.coords())), 1e-12);
  }
}

}  // namespace
}  // namespace sgop
