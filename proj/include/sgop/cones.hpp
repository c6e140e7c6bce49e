#pragma once

// Pointed closed convex cones in a tangent plane of S^2.
//
// In a 2-plane every such cone with nonempty interior is a sector spanned by
// two unit rays, so membership, polars and transport are closed-form.

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

#include "sgop/errors.hpp"
#include "sgop/sphere.hpp"

namespace sgop {

inline constexpr double kMembershipTolerance = 1e-9;
inline constexpr double kMinAperture = 1e-9;

/// Coefficients of v = alpha * gen_a + beta * gen_b.
template <typename Scalar>
struct ConeCoefficients {
  Scalar alpha;
  Scalar beta;
};

/// {alpha * gen_a + beta * gen_b : alpha, beta >= 0} with aperture in (0, pi).
template <typename Scalar>
class SectorCone {
 public:
  SectorCone(const TangentVector<Scalar>& gen_a, const TangentVector<Scalar>& gen_b)
      : gen_a_(unit(gen_a)), gen_b_(unit(gen_b)) {
    gen_a_.require_same_base(gen_b_);
    using std::atan2;
    const Scalar psi = atan2(gen_a_.vec().cross(gen_b_.vec()).norm(), gen_a_.vec().dot(gen_b_.vec()));
    if (!(psi > Scalar(kMinAperture)) || !(psi < Scalar(std::numbers::pi) - Scalar(kMinAperture))) {
      throw DegenerateError("sector cone: aperture must lie in (0, pi)");
    }
    aperture_ = psi;
  }

  const SpherePoint<Scalar>& base() const { return gen_a_.base(); }
  const TangentVector<Scalar>& gen_a() const { return gen_a_; }
  const TangentVector<Scalar>& gen_b() const { return gen_b_; }
  Scalar aperture() const { return aperture_; }

  TangentVector<Scalar> bisector() const { return (gen_a_ + gen_b_).normalized(); }

  /// Solves v = alpha a + beta b in the tangent plane via the 2x2 Gram system.
  ConeCoefficients<Scalar> decompose(const TangentVector<Scalar>& v) const {
    gen_a_.require_same_base(v);
    const Scalar c = gen_a_.vec().dot(gen_b_.vec());
    const Scalar va = gen_a_.vec().dot(v.vec());
    const Scalar vb = gen_b_.vec().dot(v.vec());
    const Scalar det = Scalar(1) - c * c;
    return {(va - c * vb) / det, (vb - c * va) / det};
  }

 private:
  static TangentVector<Scalar> unit(const TangentVector<Scalar>& v) {
    if (!(v.norm() > Scalar(kMinInputNorm))) {
      throw DegenerateError("sector cone: generator has (near) zero length");
    }
    return v.normalized();
  }

  TangentVector<Scalar> gen_a_;
  TangentVector<Scalar> gen_b_;
  Scalar aperture_{};
};

using SectorConed = SectorCone<double>;

/// Closed-cone membership: both decomposition coefficients >= -tol.
template <typename Scalar>
bool cone_contains(const SectorCone<Scalar>& cone, const TangentVector<Scalar>& v,
                   Scalar tol = Scalar(kMembershipTolerance)) {
  const auto k = cone.decompose(v);
  return k.alpha >= -tol && k.beta >= -tol;
}

/// Membership in C \ {0}: additionally requires |v| > tol.
template <typename Scalar>
bool cone_contains_strict(const SectorCone<Scalar>& cone, const TangentVector<Scalar>& v,
                          Scalar tol = Scalar(kMembershipTolerance)) {
  return v.norm() > tol && cone_contains(cone, v, tol);
}

/// D* = {a : <a, b> >= 0 for all b in D}. Generator order is chosen so that
/// polar_cone(polar_cone(C)) reproduces (gen_a, gen_b) of C.
template <typename Scalar>
SectorCone<Scalar> polar_cone(const SectorCone<Scalar>& cone) {
  const Scalar c = cone.gen_a().vec().dot(cone.gen_b().vec());
  // normal to gen_b pointing toward gen_a, and normal to gen_a toward gen_b
  const auto normal_b = TangentVector<Scalar>::Project(cone.base(), cone.gen_a().vec() - c * cone.gen_b().vec());
  const auto normal_a = TangentVector<Scalar>::Project(cone.base(), cone.gen_b().vec() - c * cone.gen_a().vec());
  return SectorCone<Scalar>(normal_b, normal_a);
}

/// C_to = P_{to, base} C: both generators parallel-transported.
template <typename Scalar>
SectorCone<Scalar> transport_cone(const SectorCone<Scalar>& cone, const SpherePoint<Scalar>& to,
                                  Scalar antipodal_tol = Scalar(kAntipodalTolerance)) {
  return SectorCone<Scalar>(parallel_transport(cone.gen_a(), to, antipodal_tol),
                            parallel_transport(cone.gen_b(), to, antipodal_tol));
}

/// y <_{C~_x} x  iff  log_x y in C_x \ {0}.
template <typename Scalar>
bool cone_order_lt(const SpherePoint<Scalar>& y, const SpherePoint<Scalar>& x,
                   const SectorCone<Scalar>& cone_at_x, Scalar tol = Scalar(kMembershipTolerance),
                   Scalar antipodal_tol = Scalar(kAntipodalTolerance)) {
  if (!same_point(cone_at_x.base(), x)) {
    throw BaseMismatchError("cone_order_lt: cone is not attached at x");
  }
  return cone_contains_strict(cone_at_x, log_map(cone_at_x.base(), y, antipodal_tol), tol);
}

/// m in C~ = exp_base(C), restricted to the injectivity region.
template <typename Scalar>
bool tilde_cone_contains(const SectorCone<Scalar>& cone, const SpherePoint<Scalar>& m,
                         Scalar tol = Scalar(kMembershipTolerance),
                         Scalar antipodal_tol = Scalar(kAntipodalTolerance)) {
  return cone_contains(cone, log_map(cone.base(), m, antipodal_tol), tol);
}

/// Unit bisector of the polar cone; strictly positive on C \ {0}.
template <typename Scalar>
TangentVector<Scalar> pick_interior_polar(const SectorCone<Scalar>& cone) {
  return polar_cone(cone).bisector();
}

/// Unit direction at fraction t in [0, 1] of the angle from gen_a to gen_b.
template <typename Scalar>
TangentVector<Scalar> sector_direction(const SectorCone<Scalar>& cone, Scalar t) {
  using std::sin;
  const Scalar psi = cone.aperture();
  const Scalar s = sin(psi);
  return TangentVector<Scalar>::Project(
      cone.base(), (sin((Scalar(1) - t) * psi) / s) * cone.gen_a().vec() +
                       (sin(t * psi) / s) * cone.gen_b().vec());
}

}  // namespace sgop
