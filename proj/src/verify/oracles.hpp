#pragma once

// Independent reference computations used to cross-check the closed forms.
// None of these share code paths with the library implementations they test.

#include <Eigen/Dense>

#include <vector>

#include "sgop/cones.hpp"
#include "sgop/gop.hpp"
#include "sgop/sphere.hpp"

namespace sgop::verify {

/// Parallel transport by RK4 integration of V' = -<V, g'> g along the unit
/// speed geodesic g from v.base() to `to`.
Eigen::Vector3d rk4_transport(const TangentVectord& v, const SpherePointd& to, int steps = 1000);

/// min{t : v - t q >= 0} by bisection on [lo, hi].
double bisection_gerstewitz(const Eigen::VectorXd& v, const Eigen::VectorXd& q, double tol = 1e-12,
                            double lo = -1e6, double hi = 1e6);

/// d_A(v) - d_{complement}(v) for a sector, from `n` ray directions sampled
/// uniformly around the full circle of the tangent plane.
double dense_oriented_distance(const SectorConed& cone, const TangentVectord& v, int n = 20000);

/// d_A - d_{complement} for the closed orthant R_+^l, by explicit projection.
double orthant_oriented_distance(const Eigen::VectorXd& v);

/// Polar membership by the defining inequality over `n` unit cone samples.
bool polar_contains_bruteforce(const SectorConed& cone, const TangentVectord& a, int n = 360,
                               double tol = 1e-12);

/// Efficiency in the flat chart at the patch center: identity objective,
/// cone taken as the reference cone, all vectors in chart coordinates.
bool flat_efficient(const GopInstance& inst, const SpherePointd& y, const Resolution& resolution);

}  // namespace sgop::verify
