#include <gtest/gtest.h>

#include "sgop/errors.hpp"
#include "sgop/scalarization.hpp"
#include "test_util.hpp"

namespace sgop {
namespace {

using test::disk_instance;
using test::kNorth;
using test::polar_point;

TEST(InG, Examples) {
  const auto inst = disk_instance();
  const SpherePointd y = polar_point(0.2, 200);
  const auto frame = image_frame(inst, y);
  EXPECT_TRUE(in_G(inst, y, y, 1e-9));
  EXPECT_TRUE(in_G(inst, y, exp_map(0.2 * frame.cone.gen_a()), 1e-9));
  EXPECT_FALSE(in_G(inst, y, exp_map(-0.2 * frame.cone.gen_a()), 1e-9));
}

TEST(InGp, Examples) {
  const auto inst = disk_instance();
  const SpherePointd y = polar_point(0.2, 200);
  const auto p = scalarizing_vector(inst, y);
  EXPECT_TRUE(in_Gp(inst, y, y, p, 1e-9));
  EXPECT_FALSE(in_Gp(inst, y, exp_map(-0.1 * p), p, 1e-9));
  EXPECT_TRUE(in_Gp(inst, y, exp_map(0.1 * p), p, 1e-9));
  for (const auto& x : sample_patch(inst.patch, 10, 24)) {
    if (in_G(inst, y, x, 1e-9)) EXPECT_TRUE(in_Gp(inst, y, x, p, 1e-9));
  }
  EXPECT_THROW(in_Gp(inst, y, y, scalarizing_vector(inst, kNorth), 1e-9), BaseMismatchError);
}

TEST(ScalarizingVector, DefaultAndExplicit) {
  auto inst = disk_instance();
  const auto frame = image_frame(inst, kNorth);
  EXPECT_LT((scalarizing_vector(inst, kNorth).vec() - pick_interior_polar(frame.cone).vec()).norm(), 1e-15);
  inst.scalarization.p = test::planar(10);
  EXPECT_LT((scalarizing_vector(inst, kNorth).vec() - test::planar(10)).norm(), 1e-15);
  inst.scalarization.p = test::planar(-5);
  EXPECT_THROW(scalarizing_vector(inst, kNorth), PreconditionError);
}

TEST(CFunction, EndpointsAndFlatLimit) {
  auto inst = disk_instance();
  const SpherePointd y = polar_point(0.1, 30);
  const SpherePointd a = polar_point(0.3, 10);
  const SpherePointd b = polar_point(0.4, 60);
  EXPECT_TRUE(check_C_function(inst, y, {{a, a}}, {0.0, 0.3, 1.0}, 1e-12));
  EXPECT_TRUE(check_C_function(inst, y, {{a, b}}, {0.0, 1.0}, 1e-12));
  EXPECT_THROW(check_C_function(inst, y, {{a, b}}, {1.5}, 1e-12), PreconditionError);

  inst.patch = Patchd(kNorth, 1e-2);
  inst.constraints = {BallConstraint{kNorth, 1.0}};
  std::vector<std::pair<SpherePointd, SpherePointd>> pairs;
  const auto pts = sample_patch(inst.patch, 3, 6);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) pairs.emplace_back(pts[i], pts[i + 1]);
  EXPECT_TRUE(check_C_function(inst, kNorth, pairs, {0.25, 0.5, 0.75}, 1e-4));
}

TEST(QuasiMin, OnlyYQualifies) {
  const auto inst = disk_instance();
  const SpherePointd y = test::grid_point(inst, 0.48, 40);
  const auto r = solve_quasi_min(inst, y, scalarizing_vector(inst, y), inst.resolution, 1e-9);
  EXPECT_TRUE(r.x_best == y);
  EXPECT_EQ(r.value, 0.0);
}

TEST(QuasiMin, MatchesExhaustiveScan) {
  const auto inst = disk_instance();
  const SpherePointd y = polar_point(0.2, 220);
  const auto p = scalarizing_vector(inst, y);
  const auto r = solve_quasi_min(inst, y, p, inst.resolution, 1e-9);
  EXPECT_LT(r.value, 0.0);
  const auto frame = image_frame(inst, y);
  for (const auto& x : scan_points(inst, y, {40, 72})) {
    if (!is_feasible(inst, x) || !in_G(inst, y, x, 1e-9)) continue;
    EXPECT_GE(-p.dot(log_map(frame.fy, x)), r.value - 0.05);
  }
  for (const auto& x : scan_points(inst, y, inst.resolution)) {
    if (!is_feasible(inst, x) || !in_G(inst, y, x, 1e-9)) continue;
    EXPECT_GE(-p.dot(log_map(frame.fy, x)), r.value - 1e-9);
  }
}

TEST(Procedure, EfficientStartIsKept) {
  const auto inst = disk_instance();
  const SpherePointd y0 = test::grid_point(inst, 0.48, 40);
  const auto r = solve_gop_via_scalarization(inst, y0, {inst.resolution, 1e-9, 8});
  EXPECT_TRUE(r.x_star == y0);
  EXPECT_TRUE(r.certified);
  EXPECT_TRUE(r.stable);
}

TEST(Procedure, DominatedStartMoves) {
  const auto inst = disk_instance();
  const auto r = solve_gop_via_scalarization(inst, kNorth, {inst.resolution, 1e-9, 8});
  EXPECT_FALSE(r.x_star == kNorth);
  EXPECT_TRUE(r.certified);
  EXPECT_TRUE(r.stable);
  ASSERT_GE(r.trace.size(), 2u);
  EXPECT_TRUE(r.trace.front().improved);
  EXPECT_FALSE(r.trace.back().improved);
  EXPECT_THROW(solve_gop_via_scalarization(inst, polar_point(0.7, 0), {inst.resolution, 1e-9, 8}),
               InfeasibleError);
}

TEST(Nesting, ChartModeHoldsForIdentity) {
  const auto inst = disk_instance();
  const SpherePointd y0 = polar_point(0.2, 220);
  const auto x0 = solve_quasi_min(inst, y0, scalarizing_vector(inst, y0), inst.resolution, 1e-9).x_best;
  const auto samples = scan_points(inst, y0, {40, 72});
  EXPECT_TRUE(check_nesting(inst, y0, y0, samples, 1e-9));
  EXPECT_TRUE(check_nesting(inst, y0, x0, samples, 1e-9));
  EXPECT_THROW(check_nesting(inst, x0, y0, samples, 1e-9), PreconditionError);
}

}  // namespace
}  // namespace sgop
