#include "verify/random_instances.hpp"

#include <cmath>
#include <numbers>

#include "sgop/errors.hpp"

namespace sgop::verify {

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

SpherePointd random_point(Rng& rng) {
  std::normal_distribution<double> normal;
  while (true) {
    const Eigen::Vector3d v(normal(rng), normal(rng), normal(rng));
    if (v.norm() > 1e-3) return SpherePointd(v);
  }
}

SpherePointd random_point_in_patch(Rng& rng, const Patchd& patch, double fraction) {
  const auto [e1, e2] = tangent_frame(patch.center());
  const double r = fraction * patch.radius() * std::sqrt(uniform(rng, 0.0, 1.0));
  const double phi = uniform(rng, 0.0, 2 * std::numbers::pi);
  return exp_map(TangentVectord::Project(patch.center(), r * (std::cos(phi) * e1 + std::sin(phi) * e2)));
}

TangentVectord random_tangent(Rng& rng, const SpherePointd& base, double max_norm) {
  const auto [e1, e2] = tangent_frame(base);
  const double r = uniform(rng, 0.0, max_norm);
  const double phi = uniform(rng, 0.0, 2 * std::numbers::pi);
  return TangentVectord::Project(base, r * (std::cos(phi) * e1 + std::sin(phi) * e2));
}

SectorConed random_cone(Rng& rng, const SpherePointd& base, double min_aperture, double max_aperture) {
  const auto [e1, e2] = tangent_frame(base);
  const double start = uniform(rng, 0.0, 2 * std::numbers::pi);
  const double aperture = uniform(rng, min_aperture, max_aperture);
  const auto ray = [&](double phi) {
    return TangentVectord::Project(base, std::cos(phi) * e1 + std::sin(phi) * e2);
  };
  return SectorConed(ray(start), ray(start + aperture));
}

GopInstance random_instance(Rng& rng, const InstanceOptions& options) {
  while (true) {
    const Patchd patch(random_point(rng), uniform(rng, options.min_radius, options.max_radius));
    const SpherePointd ref = options.ref_at_center ? patch.center() : random_point_in_patch(rng, patch, 0.5);
    ObjectiveSpec objective = IdentityObjective{};
    if (!options.identity_only) {
      const int family = std::uniform_int_distribution<int>(0, 2)(rng);
      if (family == 1) {
        objective = RotationObjective{random_point(rng).coords(), uniform(rng, -0.4, 0.4)};
      } else if (family == 2) {
        objective = PullObjective{random_point_in_patch(rng, patch), uniform(rng, 0.0, 0.7)};
      }
    }
    std::vector<ConstraintTerm> constraints;
    const int l = std::uniform_int_distribution<int>(1, options.max_constraints)(rng);
    for (int i = 0; i < l; ++i) {
      if (uniform(rng, 0.0, 1.0) < 0.5) {
        constraints.emplace_back(BallConstraint{random_point_in_patch(rng, patch, 0.7),
                                                uniform(rng, 0.3, 1.0) * patch.radius()});
      } else {
        const Eigen::Vector3d normal = random_point(rng).coords();
        const SpherePointd anchor = random_point_in_patch(rng, patch, 0.7);
        constraints.emplace_back(AffineConstraint{normal, normal.dot(anchor.coords()) - uniform(rng, 0.0, 0.3) * patch.radius()});
      }
    }
    GopInstance inst{patch, random_cone(rng, ref), objective, constraints, {}, options.resolution, {}, {},
                     std::nullopt};
    try {
      validate_instance(inst);
      return inst;
    } catch (const PreconditionError&) {
    }
  }
}

std::vector<SpherePointd> feasible_grid_points(const GopInstance& inst) {
  std::vector<SpherePointd> out;
  for (const auto& x : sample_patch(inst.patch, inst.resolution.radial, inst.resolution.angular)) {
    if (is_feasible(inst, x)) out.push_back(x);
  }
  return out;
}

}  // namespace sgop::verify
