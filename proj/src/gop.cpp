#include "sgop/gop.hpp"

#include <Eigen/Geometry>

#include <cmath>
#include <algorithm>
#include <string>
#include <type_traits>

#include "sgop/errors.hpp"
#include "sgop/parallel.hpp"

namespace sgop {

namespace {

constexpr double kPatchSlack = 1e-9;

void require_in_patch(const GopInstance& inst, const SpherePointd& x, const char* what) {
  if (!inst.patch.contains(x, kPatchSlack)) {
    throw RangeError(std::string(what) + ": point lies outside the patch");
  }
}

}  // namespace

void require_feasible(const GopInstance& inst, const SpherePointd& y) {
  if (!is_feasible(inst, y)) throw InfeasibleError("candidate point violates the constraints");
}

void validate_instance(const GopInstance& inst) {
  if (!inst.patch.contains(inst.ref_point(), kPatchSlack)) {
    throw PreconditionError("reference point must lie inside the patch");
  }
  if (const auto* rot = std::get_if<RotationObjective>(&inst.objective)) {
    if (!(rot->axis.norm() > 1e-12)) throw PreconditionError("rotation axis must be nonzero");
    if (!std::isfinite(rot->angle)) throw PreconditionError("rotation angle must be finite");
  }
  if (const auto* pull = std::get_if<PullObjective>(&inst.objective)) {
    if (!inst.patch.contains(pull->anchor, kPatchSlack)) {
      throw PreconditionError("pull anchor must lie inside the patch");
    }
    if (!(pull->t >= 0.0 && pull->t <= 1.0)) throw PreconditionError("pull t must lie in [0, 1]");
  }
  if (inst.constraints.empty()) throw PreconditionError("at least one constraint is required");
  for (const auto& term : inst.constraints) {
    if (const auto* ball = std::get_if<BallConstraint>(&term)) {
      if (!std::isfinite(ball->radius)) throw PreconditionError("ball radius must be finite");
    } else {
      const auto& aff = std::get<AffineConstraint>(term);
      if (!aff.normal.allFinite() || !std::isfinite(aff.offset)) {
        throw PreconditionError("affine constraint must be finite");
      }
    }
  }
  if (inst.resolution.radial < 1 || inst.resolution.angular < 3) {
    throw PreconditionError("resolution needs radial >= 1 and angular >= 3");
  }
  const auto& tol = inst.tolerances;
  if (!(tol.membership > 0 && tol.feasibility > 0 && tol.antipodal > 0 && tol.certificate > 0)) {
    throw PreconditionError("tolerances must be positive");
  }
  if (inst.grid.n_angle < 1) throw PreconditionError("search grid needs n_angle >= 1");
  if (inst.grid.lambda_levels.empty() || inst.grid.lambda_scales.empty() ||
      inst.grid.gamma_levels.empty()) {
    throw PreconditionError("search grid levels must be nonempty");
  }
  for (double l : inst.grid.lambda_levels) {
    if (!(l >= 0.0)) throw PreconditionError("lambda levels must be >= 0");
  }
  for (double s : inst.grid.lambda_scales) {
    if (!(s > 0.0)) throw PreconditionError("lambda scales must be > 0");
  }
  for (double g : inst.grid.gamma_levels) {
    if (!(g < 0.0)) throw PreconditionError("gamma levels must be < 0");
  }
  if (inst.scalarization.max_rounds < 1) throw PreconditionError("max_rounds must be >= 1");

  bool any_feasible = false;
  for (const auto& x : sample_patch(inst.patch, inst.resolution.radial, inst.resolution.angular)) {
    const SpherePointd fx = evaluate_objective(inst, x);
    if (!(distance(fx, inst.ref_point()) < std::numbers::pi - tol.antipodal)) {
      throw PreconditionError("objective maps a patch point antipodal to the reference point");
    }
    any_feasible = any_feasible || is_feasible(inst, x);
  }
  if (!any_feasible) throw PreconditionError("feasible set is empty at the configured resolution");
}

SpherePointd evaluate_objective(const GopInstance& inst, const SpherePointd& x) {
  require_in_patch(inst, x, "evaluate_objective");
  return std::visit(
      [&](const auto& f) -> SpherePointd {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, IdentityObjective>) {
          return x;
        } else if constexpr (std::is_same_v<F, RotationObjective>) {
          const Eigen::AngleAxisd rotation(f.angle, f.axis.normalized());
          return SpherePointd(rotation * x.coords());
        } else {
          return exp_map(f.t * log_map(x, f.anchor, inst.tolerances.antipodal));
        }
      },
      inst.objective);
}

Eigen::VectorXd evaluate_constraints(const GopInstance& inst, const SpherePointd& x) {
  require_in_patch(inst, x, "evaluate_constraints");
  Eigen::VectorXd g(inst.num_constraints());
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const auto& term = inst.constraints[static_cast<std::size_t>(i)];
    if (const auto* ball = std::get_if<BallConstraint>(&term)) {
      g[i] = ball->radius - distance(x, ball->center);
    } else {
      const auto& aff = std::get<AffineConstraint>(term);
      g[i] = aff.normal.dot(x.coords()) - aff.offset;
    }
  }
  return g;
}

bool is_feasible(const GopInstance& inst, const SpherePointd& x) {
  return (evaluate_constraints(inst, x).array() >= -inst.tolerances.feasibility).all();
}

ImageFrame image_frame(const GopInstance& inst, const SpherePointd& y) {
  SpherePointd fy = evaluate_objective(inst, y);
  SectorConed cone = transport_cone(inst.ref_cone, fy, inst.tolerances.antipodal);
  return {std::move(fy), std::move(cone)};
}

ImagePoint image_map(const GopInstance& inst, const ImageFrame& frame, const SpherePointd& x) {
  return {log_map(frame.fy, evaluate_objective(inst, x), inst.tolerances.antipodal),
          evaluate_constraints(inst, x), x};
}

ImagePoint image_map(const GopInstance& inst, const SpherePointd& y, const SpherePointd& x) {
  return image_map(inst, image_frame(inst, y), x);
}

bool in_H(const GopInstance& inst, const ImageFrame& frame, const ImagePoint& pt) {
  if (!same_point(pt.u.base(), frame.fy)) {
    throw BaseMismatchError("in_H: image point is not based at f(y)");
  }
  if (pt.v.size() != inst.num_constraints()) {
    throw DimensionMismatchError("in_H: constraint image has the wrong length");
  }
  return cone_contains_strict(frame.cone, pt.u, inst.tolerances.membership) &&
         (pt.v.array() >= -inst.tolerances.feasibility).all();
}

bool in_H(const GopInstance& inst, const SpherePointd& y, const ImagePoint& pt) {
  return in_H(inst, image_frame(inst, y), pt);
}

std::vector<SpherePointd> scan_points(const GopInstance& inst, const SpherePointd& y,
                                      const Resolution& resolution) {
  auto points = sample_patch(inst.patch, resolution.radial, resolution.angular);
  bool on_grid = false;
  for (const auto& x : points) {
    if (same_point(x, y)) {
      on_grid = true;
      break;
    }
  }
  if (!on_grid) points.push_back(y);
  return points;
}

std::vector<ImagePoint> image_cloud(const GopInstance& inst, const SpherePointd& y,
                                    const Resolution& resolution, unsigned threads) {
  require_in_patch(inst, y, "image_cloud");
  const ImageFrame frame = image_frame(inst, y);
  const auto points = scan_points(inst, y, resolution);
  return parallel_map(points.size(), threads,
                      [&](std::size_t i) { return image_map(inst, frame, points[i]); });
}

bool in_extended_image(const GopInstance& inst, const ImageFrame& frame, const ImagePoint& pt,
                       const std::vector<ImagePoint>& cloud) {
  if (!same_point(pt.u.base(), frame.fy)) {
    throw BaseMismatchError("in_extended_image: point is not based at f(y)");
  }
  const double tol_mem = inst.tolerances.membership;
  const double tol_feas = inst.tolerances.feasibility;
  for (const auto& e : cloud) {
    if (e.v.size() != pt.v.size()) {
      throw DimensionMismatchError("in_extended_image: constraint images differ in length");
    }
    if ((pt.v.array() <= e.v.array() + tol_feas).all() &&
        cone_contains(frame.cone, e.u - pt.u, tol_mem)) {
      return true;
    }
  }
  return false;
}

bool in_extended_image(const GopInstance& inst, const SpherePointd& y, const ImagePoint& pt,
                       const std::vector<ImagePoint>& cloud) {
  return in_extended_image(inst, image_frame(inst, y), pt, cloud);
}

EfficiencyReport brute_force_efficient(const GopInstance& inst, const SpherePointd& y,
                                       const Resolution& resolution) {
  require_in_patch(inst, y, "brute_force_efficient");
  require_feasible(inst, y);
  const SpherePointd fy = evaluate_objective(inst, y);
  const SectorConed cone = transport_cone(inst.ref_cone, fy, inst.tolerances.antipodal);
  EfficiencyReport report;
  report.resolution = resolution;
  for (const auto& x : scan_points(inst, y, resolution)) {
    if (!is_feasible(inst, x)) continue;
    ++report.feasible_count;
    if (report.efficient &&
        cone_order_lt(evaluate_objective(inst, x), fy, cone, inst.tolerances.membership,
                      inst.tolerances.antipodal)) {
      report.efficient = false;
      report.witness = x;
    }
  }
  return report;
}

DisjointnessReport check_disjoint_H_K(const GopInstance& inst, const SpherePointd& y,
                                      const std::vector<ImagePoint>& cloud) {
  require_feasible(inst, y);
  const ImageFrame frame = image_frame(inst, y);
  bool any_feasible = false;
  for (const auto& pt : cloud) {
    any_feasible = any_feasible || (pt.v.array() >= -inst.tolerances.feasibility).all();
  }
  if (!any_feasible) throw EmptyFeasibleRegionError("no sampled point satisfies the constraints");
  for (const auto& pt : cloud) {
    if (in_H(inst, frame, pt)) return {false, pt};
  }
  return {};
}

DisjointnessReport check_disjoint_H_K(const GopInstance& inst, const SpherePointd& y,
                                      const Resolution& resolution) {
  return check_disjoint_H_K(inst, y, image_cloud(inst, y, resolution));
}

DisjointnessReport check_disjoint_H_extended(const GopInstance& inst, const SpherePointd& y,
                                             const std::vector<ImagePoint>& cloud) {
  require_feasible(inst, y);
  const ImageFrame frame = image_frame(inst, y);
  const auto& cone = frame.cone;
  for (const auto& e : cloud) {
    const auto k = cone.decompose(e.u);
    ImagePoint probe{std::max(k.alpha, 0.0) * cone.gen_a() + std::max(k.beta, 0.0) * cone.gen_b(),
                     e.v.cwiseMax(0.0), e.source};
    if (!in_H(inst, frame, probe)) continue;
    if (in_extended_image(inst, frame, probe, cloud)) return {false, probe};
  }
  return {};
}

}  // namespace sgop
