#pragma once

// Closed-form geometry of the unit 2-sphere embedded in R^3.
//
// Points are unit 3-vectors and tangent vectors are 3-vectors orthogonal to
// their base point. All maps here are exact formulas; nothing is iterative.

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <vector>

#include "sgop/errors.hpp"

namespace sgop {

inline constexpr double kUnitTolerance = 1e-12;
inline constexpr double kAntipodalTolerance = 1e-9;
inline constexpr double kMinInputNorm = 1e-6;
inline constexpr double kMaxPatchRadius = std::numbers::pi / 2 - 1e-6;

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;

template <typename Scalar>
class SpherePoint {
 public:
  /// Renormalizes `coords`; rejects vectors shorter than kMinInputNorm.
  explicit SpherePoint(const Vector3<Scalar>& coords) {
    const Scalar n = coords.norm();
    if (!(n >= Scalar(kMinInputNorm))) {
      throw RangeError("sphere point: coordinates have (near) zero norm");
    }
    coords_ = coords / n;
  }
  SpherePoint(Scalar x, Scalar y, Scalar z) : SpherePoint(Vector3<Scalar>(x, y, z)) {}

  const Vector3<Scalar>& coords() const { return coords_; }
  Scalar operator[](Eigen::Index i) const { return coords_[i]; }

  SpherePoint operator-() const { return SpherePoint(-coords_, Unchecked{}); }

  bool operator==(const SpherePoint& other) const { return coords_ == other.coords_; }

 private:
  struct Unchecked {};
  SpherePoint(const Vector3<Scalar>& unit, Unchecked) : coords_(unit) {}

  Vector3<Scalar> coords_;
};

/// True when the two points agree to within `tol` in the ambient norm.
template <typename Scalar>
bool same_point(const SpherePoint<Scalar>& p, const SpherePoint<Scalar>& q,
                Scalar tol = Scalar(kUnitTolerance)) {
  return (p.coords() - q.coords()).norm() <= tol;
}

/// Element of T_x S^2, stored as an ambient 3-vector.
template <typename Scalar>
class TangentVector {
 public:
  /// Accepts `vec` if it is tangent at `base` up to 1e-9 (relative) and removes
  /// the residual normal component so the stored vector is tangent to rounding.
  TangentVector(const SpherePoint<Scalar>& base, const Vector3<Scalar>& vec) : base_(base) {
    const Scalar normal = base.coords().dot(vec);
    using std::abs;
    using std::max;
    if (!(abs(normal) <= Scalar(1e-9) * max(Scalar(1), vec.norm()))) {
      throw RangeError("tangent vector: not orthogonal to its base point");
    }
    vec_ = vec - normal * base.coords();
  }

  /// Orthogonal projection of an arbitrary ambient vector onto T_base S^2.
  static TangentVector Project(const SpherePoint<Scalar>& base, const Vector3<Scalar>& vec) {
    return TangentVector(base, vec - base.coords().dot(vec) * base.coords());
  }
  static TangentVector Zero(const SpherePoint<Scalar>& base) {
    return TangentVector(base, Vector3<Scalar>::Zero());
  }

  const SpherePoint<Scalar>& base() const { return base_; }
  const Vector3<Scalar>& vec() const { return vec_; }
  Scalar norm() const { return vec_.norm(); }

  Scalar dot(const TangentVector& other) const {
    require_same_base(other);
    return vec_.dot(other.vec_);
  }

  TangentVector normalized() const {
    const Scalar n = norm();
    if (!(n > Scalar(0))) throw RangeError("tangent vector: cannot normalize zero vector");
    return TangentVector(base_, vec_ / n, Unchecked{});
  }

  TangentVector operator-() const { return TangentVector(base_, -vec_, Unchecked{}); }
  TangentVector operator*(Scalar s) const { return TangentVector(base_, s * vec_, Unchecked{}); }
  friend TangentVector operator*(Scalar s, const TangentVector& v) { return v * s; }
  TangentVector operator+(const TangentVector& other) const {
    require_same_base(other);
    return TangentVector(base_, vec_ + other.vec_, Unchecked{});
  }
  TangentVector operator-(const TangentVector& other) const {
    require_same_base(other);
    return TangentVector(base_, vec_ - other.vec_, Unchecked{});
  }

  void require_same_base(const TangentVector& other) const {
    if (!same_point(base_, other.base_)) {
      throw BaseMismatchError("tangent vectors live in different tangent planes");
    }
  }

 private:
  struct Unchecked {};
  TangentVector(const SpherePoint<Scalar>& base, const Vector3<Scalar>& vec, Unchecked)
      : base_(base), vec_(vec) {}

  SpherePoint<Scalar> base_;
  Vector3<Scalar> vec_;
};

/// Geodesic ball of radius < pi/2: geodesically convex, unique minimal geodesics.
template <typename Scalar>
class Patch {
 public:
  Patch(const SpherePoint<Scalar>& center, Scalar radius) : center_(center), radius_(radius) {
    if (!(radius > Scalar(0)) || !(radius <= Scalar(kMaxPatchRadius))) {
      throw RangeError("patch: radius must lie in (0, pi/2 - 1e-6]");
    }
  }

  const SpherePoint<Scalar>& center() const { return center_; }
  Scalar radius() const { return radius_; }

  bool contains(const SpherePoint<Scalar>& x, Scalar tol = Scalar(kUnitTolerance)) const;

 private:
  SpherePoint<Scalar> center_;
  Scalar radius_;
};

using SpherePointd = SpherePoint<double>;
using TangentVectord = TangentVector<double>;
using Patchd = Patch<double>;

/// Intrinsic distance d(p, q) in [0, pi].
template <typename Scalar>
Scalar distance(const SpherePoint<Scalar>& p, const SpherePoint<Scalar>& q) {
  using std::atan2;
  return atan2(p.coords().cross(q.coords()).norm(), p.coords().dot(q.coords()));
}

template <typename Scalar>
bool Patch<Scalar>::contains(const SpherePoint<Scalar>& x, Scalar tol) const {
  return distance(center_, x) <= radius_ + tol;
}

/// exp_p(v) = cos|v| p + sin|v| v/|v|, restricted to |v| < pi.
template <typename Scalar>
SpherePoint<Scalar> exp_map(const TangentVector<Scalar>& v) {
  using std::cos;
  using std::sin;
  const Scalar n = v.norm();
  if (!(n < Scalar(std::numbers::pi))) {
    throw RangeError("exp_map: tangent vector norm must be < pi");
  }
  if (n == Scalar(0)) return v.base();
  return SpherePoint<Scalar>(cos(n) * v.base().coords() + (sin(n) / n) * v.vec());
}

/// exp_p^{-1}(q); |result| = d(p, q). Throws AntipodalError when d >= pi - tol.
template <typename Scalar>
TangentVector<Scalar> log_map(const SpherePoint<Scalar>& p, const SpherePoint<Scalar>& q,
                              Scalar antipodal_tol = Scalar(kAntipodalTolerance)) {
  const Scalar d = distance(p, q);
  if (!(d < Scalar(std::numbers::pi) - antipodal_tol)) {
    throw AntipodalError("log_map: points are (nearly) antipodal");
  }
  const Vector3<Scalar> w = q.coords() - p.coords().dot(q.coords()) * p.coords();
  const Scalar s = w.norm();
  if (s == Scalar(0) || d == Scalar(0)) return TangentVector<Scalar>::Zero(p);
  return TangentVector<Scalar>(p, (d / s) * w);
}

/// Unit-speed minimal geodesic from x to y evaluated at arc length t in [0, d(x,y)].
template <typename Scalar>
SpherePoint<Scalar> geodesic_point(const SpherePoint<Scalar>& x, const SpherePoint<Scalar>& y,
                                   Scalar t,
                                   Scalar antipodal_tol = Scalar(kAntipodalTolerance)) {
  using std::cos;
  using std::sin;
  const Scalar d = distance(x, y);
  if (!(d < Scalar(std::numbers::pi) - antipodal_tol)) {
    throw AntipodalError("geodesic_point: endpoints are (nearly) antipodal");
  }
  if (!(t >= -Scalar(kUnitTolerance) && t <= d + Scalar(kUnitTolerance))) {
    throw RangeError("geodesic_point: t outside [0, d(x, y)]");
  }
  const Scalar s = x.coords().cross(y.coords()).norm();
  if (s == Scalar(0)) return x;
  const Scalar c = x.coords().dot(y.coords());
  // (cos t - c sin t / s) x + (sin t / s) y, regrouped to avoid cancellation.
  return SpherePoint<Scalar>(cos(t) * x.coords() + (sin(t) / s) * (y.coords() - c * x.coords()));
}

/// Parallel transport of v along the minimal geodesic from v.base() to `to`.
///
/// With e the unit initial velocity and d the length of the geodesic, the
/// component of v along e maps to cos(d) e - sin(d) p; the component normal
/// to the geodesic plane is unchanged.
template <typename Scalar>
TangentVector<Scalar> parallel_transport(const TangentVector<Scalar>& v,
                                         const SpherePoint<Scalar>& to,
                                         Scalar antipodal_tol = Scalar(kAntipodalTolerance)) {
  using std::cos;
  using std::sin;
  const SpherePoint<Scalar>& p = v.base();
  const TangentVector<Scalar> step = log_map(p, to, antipodal_tol);
  const Scalar d = step.norm();
  if (d == Scalar(0)) return TangentVector<Scalar>::Project(to, v.vec());
  const Vector3<Scalar> e = step.vec() / d;
  const Scalar along = v.vec().dot(e);
  const Vector3<Scalar> normal_part = v.vec() - along * e;
  return TangentVector<Scalar>::Project(
      to, normal_part + along * (cos(d) * e - sin(d) * p.coords()));
}

/// Deterministic orthonormal frame (e1, e2) of T_x S^2 with e1 x e2 = x.
template <typename Scalar>
std::pair<Vector3<Scalar>, Vector3<Scalar>> tangent_frame(const SpherePoint<Scalar>& x) {
  Eigen::Index axis = 0;
  x.coords().cwiseAbs().minCoeff(&axis);
  Vector3<Scalar> e = Vector3<Scalar>::Unit(axis);
  Vector3<Scalar> e1 = (e - x.coords().dot(e) * x.coords()).normalized();
  Vector3<Scalar> e2 = x.coords().cross(e1);
  return {e1, e2};
}

/// Polar grid over the patch: the center, then `radial_steps` rings of
/// `angular_steps` points each (radius-major, angle-minor).
template <typename Scalar>
std::vector<SpherePoint<Scalar>> sample_patch(const Patch<Scalar>& patch, int radial_steps,
                                              int angular_steps) {
  if (radial_steps < 1 || angular_steps < 3) {
    throw RangeError("sample_patch: need radial_steps >= 1 and angular_steps >= 3");
  }
  using std::cos;
  using std::sin;
  const auto [e1, e2] = tangent_frame(patch.center());
  const Scalar two_pi = Scalar(2) * Scalar(std::numbers::pi);
  std::vector<SpherePoint<Scalar>> points;
  points.reserve(1 + static_cast<std::size_t>(radial_steps) * angular_steps);
  points.push_back(patch.center());
  for (int i = 1; i <= radial_steps; ++i) {
    const Scalar r = patch.radius() * Scalar(i) / Scalar(radial_steps);
    for (int j = 0; j < angular_steps; ++j) {
      const Scalar phi = two_pi * Scalar(j) / Scalar(angular_steps);
      const Vector3<Scalar> dir = cos(phi) * e1 + sin(phi) * e2;
      points.push_back(exp_map(TangentVector<Scalar>::Project(patch.center(), r * dir)));
    }
  }
  return points;
}

}  // namespace sgop
