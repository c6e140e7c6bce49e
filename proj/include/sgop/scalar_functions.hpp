#pragma once

// Oriented distance and Gerstewitz scalarizing functions.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

#include "sgop/cones.hpp"
#include "sgop/errors.hpp"

namespace sgop {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Value standing in for d_emptyset = +inf. Supported calls never produce it.
template <typename Scalar>
inline constexpr Scalar kEmptySetDistance = std::numeric_limits<Scalar>::infinity();

/// Delta_{R+}(s) = d_{R+}(s) - d_{R-}(s) = -s.
template <typename Scalar>
Scalar oriented_distance_halfline(Scalar s) {
  return -s;
}

/// Delta over the nonnegative orthant of R^l.
template <typename Scalar>
Scalar oriented_distance_orthant(const VectorX<Scalar>& v) {
  if (v.size() == 0) throw DimensionMismatchError("oriented distance: empty vector");
  if ((v.array() >= Scalar(0)).all()) return -v.minCoeff();
  return v.cwiseMin(Scalar(0)).norm();
}

namespace detail {

/// Euclidean distance from v to the ray {t * dir : t >= 0}, dir unit.
template <typename Scalar>
Scalar distance_to_ray(const Vector3<Scalar>& v, const Vector3<Scalar>& dir) {
  const Scalar along = v.dot(dir);
  if (along <= Scalar(0)) return v.norm();
  return (v - along * dir).norm();
}

}  // namespace detail

/// Signed distance to a sector: -dist(v, boundary) inside, +dist(v, cone)
/// outside. Both distances are attained on the two boundary rays.
template <typename Scalar>
Scalar oriented_distance_sector(const SectorCone<Scalar>& cone, const TangentVector<Scalar>& v) {
  cone.gen_a().require_same_base(v);
  const Scalar to_boundary = std::min(detail::distance_to_ray(v.vec(), cone.gen_a().vec()),
                                      detail::distance_to_ray(v.vec(), cone.gen_b().vec()));
  return cone_contains(cone, v, Scalar(0)) ? -to_boundary : to_boundary;
}

/// Direction q of the Gerstewitz function for K = R+^l; q must be < 0 componentwise.
template <typename Scalar>
class OrthantParams {
 public:
  explicit OrthantParams(VectorX<Scalar> q) : q_(std::move(q)) {
    if (q_.size() == 0) throw DimensionMismatchError("gerstewitz: empty direction");
    if (!(q_.array() < Scalar(0)).all()) {
      throw PreconditionError("gerstewitz: direction must be strictly negative");
    }
  }

  Eigen::Index dimension() const { return q_.size(); }
  const VectorX<Scalar>& q() const { return q_; }

 private:
  VectorX<Scalar> q_;
};

using OrthantParamsd = OrthantParams<double>;

/// xi(v) = min{t : v in t q + R+^l} = max_i v_i / q_i.
template <typename Scalar>
Scalar gerstewitz(const VectorX<Scalar>& v, const OrthantParams<Scalar>& params) {
  if (v.size() != params.dimension()) {
    throw DimensionMismatchError("gerstewitz: vector and direction differ in length");
  }
  return v.cwiseQuotient(params.q()).maxCoeff();
}

}  // namespace sgop
