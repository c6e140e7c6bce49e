#include "verify/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace sgop::verify {

Eigen::Vector3d rk4_transport(const TangentVectord& v, const SpherePointd& to, int steps) {
  const Eigen::Vector3d p = v.base().coords();
  const Eigen::Vector3d q = to.coords();
  const double d = std::atan2(p.cross(q).norm(), p.dot(q));
  if (d == 0.0) return v.vec();
  const Eigen::Vector3d e = (q - p.dot(q) * p).normalized();
  auto gamma = [&](double t) -> Eigen::Vector3d { return std::cos(t) * p + std::sin(t) * e; };
  auto velocity = [&](double t) -> Eigen::Vector3d { return -std::sin(t) * p + std::cos(t) * e; };
  auto rhs = [&](double t, const Eigen::Vector3d& w) -> Eigen::Vector3d {
    return -w.dot(velocity(t)) * gamma(t);
  };
  Eigen::Vector3d w = v.vec();
  const double h = d / steps;
  for (int k = 0; k < steps; ++k) {
    const double t = k * h;
    const Eigen::Vector3d k1 = rhs(t, w);
    const Eigen::Vector3d k2 = rhs(t + h / 2, w + h / 2 * k1);
    const Eigen::Vector3d k3 = rhs(t + h / 2, w + h / 2 * k2);
    const Eigen::Vector3d k4 = rhs(t + h, w + h * k3);
    w += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return w;
}

double bisection_gerstewitz(const Eigen::VectorXd& v, const Eigen::VectorXd& q, double tol, double lo,
                            double hi) {
  auto feasible = [&](double t) { return ((v - t * q).array() >= 0.0).all(); };
  // feasibility is monotone in t because q < 0
  while (hi - lo > tol) {
    const double mid = lo + (hi - lo) / 2;
    if (mid <= lo || mid >= hi) break;
    if (feasible(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double dense_oriented_distance(const SectorConed& cone, const TangentVectord& v, int n) {
  const Eigen::Vector3d a = cone.gen_a().vec();
  const Eigen::Vector3d normal = cone.base().coords();
  const Eigen::Vector3d a_perp = normal.cross(a);
  const Eigen::Vector3d b = cone.gen_b().vec();
  const double angle_b = std::atan2(b.dot(a_perp), b.dot(a));
  const double sign = angle_b >= 0 ? 1.0 : -1.0;
  const double aperture = std::abs(angle_b);

  auto ray_distance = [&](const Eigen::Vector3d& dir) {
    const double along = v.vec().dot(dir);
    return along <= 0 ? v.vec().norm() : (v.vec() - along * dir).norm();
  };
  double to_cone = std::numeric_limits<double>::infinity();
  double to_complement = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n; ++k) {
    const double phi = 2 * std::numbers::pi * k / n;
    const Eigen::Vector3d dir = std::cos(sign * phi) * a + std::sin(sign * phi) * a_perp;
    const double dist = ray_distance(dir);
    if (phi <= aperture) to_cone = std::min(to_cone, dist);
    if (phi >= aperture || phi == 0.0) to_complement = std::min(to_complement, dist);
  }
  to_cone = std::min(to_cone, ray_distance(b));
  to_complement = std::min(to_complement, ray_distance(b));
  return to_cone - to_complement;
}

double orthant_oriented_distance(const Eigen::VectorXd& v) {
  const Eigen::VectorXd projection = v.cwiseMax(0.0);
  const double to_orthant = (v - projection).norm();
  // nearest point of the complement closure lies on a coordinate hyperplane
  const double to_complement = to_orthant > 0 ? 0.0 : v.minCoeff();
  return to_orthant - to_complement;
}

bool polar_contains_bruteforce(const SectorConed& cone, const TangentVectord& a, int n, double tol) {
  for (int k = 0; k <= n; ++k) {
    const TangentVectord b = sector_direction(cone, static_cast<double>(k) / n);
    if (a.vec().dot(b.vec()) < -tol) return false;
  }
  return true;
}

bool flat_efficient(const GopInstance& inst, const SpherePointd& y, const Resolution& resolution) {
  const SpherePointd& c = inst.patch.center();
  const auto chart = [&](const SpherePointd& x) { return log_map(c, x).vec(); };
  const SectorConed cone = transport_cone(inst.ref_cone, c);
  const Eigen::Vector3d cy = chart(y);
  for (const auto& x : scan_points(inst, y, resolution)) {
    if (!is_feasible(inst, x)) continue;
    if (cone_contains_strict(cone, TangentVectord::Project(c, chart(x) - cy), inst.tolerances.membership)) {
      return false;
    }
  }
  return true;
}

}  // namespace sgop::verify
