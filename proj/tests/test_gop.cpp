#include <gtest/gtest.h>

#include "sgop/errors.hpp"
#include "sgop/gop.hpp"
#include "test_util.hpp"

namespace sgop {
namespace {

using test::disk_instance;
using test::kNorth;
using test::polar_point;

TEST(Objective, Families) {
  auto inst = disk_instance();
  const SpherePointd x = polar_point(0.3, 20);
  EXPECT_TRUE(evaluate_objective(inst, x) == x);
  inst.objective = RotationObjective{Eigen::Vector3d(0, 0, 1), 0.0};
  EXPECT_TRUE(same_point(evaluate_objective(inst, x), x, 1e-15));
  inst.objective = RotationObjective{Eigen::Vector3d(0, 0, 1), std::numbers::pi / 2};
  EXPECT_TRUE(same_point(evaluate_objective(inst, x), polar_point(0.3, 110), 1e-12));
  const SpherePointd anchor = polar_point(0.2, 200);
  inst.objective = PullObjective{anchor, 1.0};
  EXPECT_TRUE(same_point(evaluate_objective(inst, x), anchor, 1e-12));
}

TEST(Constraints, Examples) {
  auto inst = disk_instance();
  inst.constraints = {BallConstraint{kNorth, 0.5}, AffineConstraint{Eigen::Vector3d(0, 0, 1), 0.0}};
  const Eigen::VectorXd g = evaluate_constraints(inst, kNorth);
  EXPECT_DOUBLE_EQ(g[0], 0.5);
  EXPECT_DOUBLE_EQ(g[1], 1.0);
  EXPECT_NEAR(evaluate_constraints(inst, polar_point(0.5, 33))[0], 0.0, 1e-15);
  EXPECT_TRUE(is_feasible(inst, kNorth));
  EXPECT_TRUE(is_feasible(inst, polar_point(0.5, 33)));
  EXPECT_FALSE(is_feasible(inst, polar_point(0.6, 33)));
}

TEST(Validate, RejectsBadInstances) {
  auto inst = disk_instance();
  EXPECT_NO_THROW(validate_instance(inst));
  auto far = inst;
  far.ref_cone = SectorConed(TangentVectord(SpherePointd(1, 0, 0), Eigen::Vector3d(0, 1, 0)),
                             TangentVectord(SpherePointd(1, 0, 0), Eigen::Vector3d(0, 0, 1)));
  EXPECT_THROW(validate_instance(far), PreconditionError);
  auto empty = inst;
  empty.constraints = {BallConstraint{polar_point(1.4, 0), 0.1}};
  EXPECT_THROW(validate_instance(empty), PreconditionError);
  auto none = inst;
  none.constraints.clear();
  EXPECT_THROW(validate_instance(none), PreconditionError);
}

TEST(ImageMap, Examples) {
  const auto inst = disk_instance();
  const SpherePointd y = polar_point(0.2, 10);
  const auto self = image_map(inst, y, y);
  EXPECT_EQ(self.u.norm(), 0.0);
  EXPECT_DOUBLE_EQ(self.v[0], evaluate_constraints(inst, y)[0]);
  const SpherePointd x = polar_point(0.4, 70);
  const auto pt = image_map(inst, y, x);
  EXPECT_LT((pt.u.vec() - log_map(y, x).vec()).norm(), 1e-15);
  EXPECT_NEAR(pt.u.norm(), distance(y, x), 1e-12);
}

TEST(InH, Examples) {
  const auto inst = disk_instance();
  const auto frame = image_frame(inst, kNorth);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(1);
  EXPECT_FALSE(in_H(inst, frame, {TangentVectord::Zero(kNorth), zero, kNorth}));
  EXPECT_TRUE(in_H(inst, frame, {frame.cone.gen_a(), zero, kNorth}));
  EXPECT_FALSE(in_H(inst, frame, {frame.cone.bisector(), Eigen::VectorXd::Constant(1, -1.0), kNorth}));
}

TEST(ImageCloud, CountAndDeterminism) {
  const auto inst = disk_instance();
  EXPECT_EQ(image_cloud(inst, kNorth, {1, 4}).size(), 5u);
  const auto cloud = image_cloud(inst, kNorth, {6, 8});
  EXPECT_EQ(cloud.front().u.norm(), 0.0);
  const auto again = image_cloud(inst, kNorth, {6, 8}, 3);
  ASSERT_EQ(cloud.size(), again.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) EXPECT_TRUE(cloud[i].u.vec() == again[i].u.vec());
  // an off-grid y is appended
  EXPECT_EQ(image_cloud(inst, polar_point(0.11, 3), {1, 4}).size(), 6u);
}

TEST(ExtendedImage, Examples) {
  const auto inst = disk_instance();
  const SpherePointd y = polar_point(0.2, 10);
  const auto frame = image_frame(inst, y);
  const auto cloud = image_cloud(inst, y, {4, 8});
  for (const auto& pt : cloud) EXPECT_TRUE(in_extended_image(inst, frame, pt, cloud));
  const auto& base = cloud[5];
  const ImagePoint shifted{base.u - 0.3 * frame.cone.gen_b(), base.v.array() - 0.2, base.source};
  EXPECT_TRUE(in_extended_image(inst, frame, shifted, cloud));
  double vmax = -1e300;
  for (const auto& pt : cloud) vmax = std::max(vmax, pt.v.maxCoeff());
  const ImagePoint high{base.u, Eigen::VectorXd::Constant(1, vmax + 1), base.source};
  EXPECT_FALSE(in_extended_image(inst, frame, high, cloud));
}

TEST(BruteForce, EfficientBoundaryAndDominatedCenter) {
  const auto inst = disk_instance();
  const SpherePointd boundary = polar_point(0.48, 40);
  const auto eff = brute_force_efficient(inst, boundary, inst.resolution);
  EXPECT_TRUE(eff.efficient);
  EXPECT_FALSE(eff.witness.has_value());
  EXPECT_EQ(eff.feasible_count, 433u);
  const auto dom = brute_force_efficient(inst, kNorth, inst.resolution);
  ASSERT_FALSE(dom.efficient);
  ASSERT_TRUE(dom.witness.has_value());
  EXPECT_TRUE(is_feasible(inst, *dom.witness));
  EXPECT_TRUE(cone_contains_strict(image_frame(inst, kNorth).cone, log_map(kNorth, *dom.witness)));
  // inefficiency persists on a finer grid
  EXPECT_FALSE(brute_force_efficient(inst, kNorth, {40, 72}).efficient);
}

TEST(BruteForce, TinyFeasibleSetWithOutwardCone) {
  auto inst = disk_instance(0.05);
  const SpherePointd y = polar_point(0.04, 180);
  EXPECT_FALSE(brute_force_efficient(inst, y, inst.resolution).efficient);
  inst.ref_cone = test::north_cone(150, 210);
  EXPECT_TRUE(brute_force_efficient(inst, y, inst.resolution).efficient);
}

TEST(Disjointness, MatchesBruteForce) {
  const auto inst = disk_instance();
  for (const auto& y : {kNorth, polar_point(0.48, 40), polar_point(0.2, 200), polar_point(0.48, 250)}) {
    const auto cloud = image_cloud(inst, y, inst.resolution);
    const bool eff = brute_force_efficient(inst, y, inst.resolution).efficient;
    const auto hk = check_disjoint_H_K(inst, y, cloud);
    EXPECT_EQ(hk.disjoint, eff);
    EXPECT_EQ(check_disjoint_H_extended(inst, y, cloud).disjoint, eff);
    if (!hk.disjoint) {
      ASSERT_TRUE(hk.witness.has_value());
      EXPECT_TRUE(is_feasible(inst, hk.witness->source));
    }
  }
}

TEST(Feasibility, RequireFeasible) {
  const auto inst = disk_instance();
  EXPECT_NO_THROW(require_feasible(inst, kNorth));
  EXPECT_THROW(require_feasible(inst, polar_point(0.7, 0)), InfeasibleError);
}

}  // namespace
}  // namespace sgop
