#pragma once

// Seeded generators for points, cones and whole problem instances.

#include <cstdint>
#include <random>
#include <vector>

#include "sgop/gop.hpp"

namespace sgop::verify {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi);

SpherePointd random_point(Rng& rng);
/// Uniform in area over the geodesic disk (up to curvature).
SpherePointd random_point_in_patch(Rng& rng, const Patchd& patch, double fraction = 1.0);
/// Uniformly random direction with norm drawn from [0, max_norm].
TangentVectord random_tangent(Rng& rng, const SpherePointd& base, double max_norm);
SectorConed random_cone(Rng& rng, const SpherePointd& base, double min_aperture = 0.2,
                        double max_aperture = 2.9);

struct InstanceOptions {
  bool identity_only = false;
  bool ref_at_center = false;
  double min_radius = 0.3;
  double max_radius = 1.2;
  int max_constraints = 3;
  Resolution resolution{20, 36};
};

/// Draws instances until one passes validate_instance.
GopInstance random_instance(Rng& rng, const InstanceOptions& options = {});

/// Feasible points of the sampling grid at the instance resolution.
std::vector<SpherePointd> feasible_grid_points(const GopInstance& inst);

}  // namespace sgop::verify
