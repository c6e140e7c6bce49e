#include "verify/properties.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "sgop/errors.hpp"
#include "sgop/scalar_functions.hpp"
#include "sgop/scalarization.hpp"
#include "sgop/separation.hpp"
#include "verify/oracles.hpp"
#include "verify/random_instances.hpp"

namespace sgop::verify {

namespace {

constexpr double kPi = std::numbers::pi;

std::string case_tag(std::uint64_t seed, int index) {
  return "seed=" + std::to_string(seed) + " case=" + std::to_string(index);
}

template <typename T>
std::string fmt(const T& x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

Eigen::VectorXd random_vector(Rng& rng, Eigen::Index l, double lo, double hi) {
  Eigen::VectorXd v(l);
  for (Eigen::Index i = 0; i < l; ++i) v[i] = uniform(rng, lo, hi);
  return v;
}

std::vector<PropertyResult> collect(std::initializer_list<const PropertyCheck*> checks) {
  std::vector<PropertyResult> out;
  for (const auto* c : checks) out.push_back(c->result());
  return out;
}

void append(std::vector<PropertyResult>& out, std::vector<PropertyResult> more) {
  out.insert(out.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
}

/// Candidate points: `count` feasible grid points chosen at random.
std::vector<SpherePointd> pick_candidates(Rng& rng, const GopInstance& inst, int count) {
  const auto feasible = feasible_grid_points(inst);
  std::vector<SpherePointd> out;
  std::uniform_int_distribution<std::size_t> pick(0, feasible.size() - 1);
  for (int k = 0; k < count; ++k) out.push_back(feasible[pick(rng)]);
  return out;
}

}  // namespace

std::string describe(const Eigen::VectorXd& v) {
  std::ostringstream os;
  os << std::setprecision(17) << '[';
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ']';
  return os.str();
}

std::string describe(const SpherePointd& x) { return describe(Eigen::VectorXd(x.coords())); }

std::vector<PropertyResult> geometry_round_trip(std::uint64_t seed, int n) {
  Rng rng(seed);
  PropertyCheck round_trip("log(exp(v)) = v within 1e-9 for |v| <= pi - 0.1");
  PropertyCheck log_norm("|log_q p| = d(p, q) within 1e-12");
  for (int i = 0; i < n; ++i) {
    const SpherePointd p = random_point(rng);
    const TangentVectord v = random_tangent(rng, p, kPi - 0.1);
    const TangentVectord back = log_map(p, exp_map(v));
    const double err = (back.vec() - v.vec()).norm();
    round_trip.expect(err <= 1e-9, [&] {
      return case_tag(seed, i) + " p=" + describe(p) + " v=" + describe(Eigen::VectorXd(v.vec())) +
             " err=" + fmt(err);
    });
    const SpherePointd q = random_point(rng);
    if (distance(p, q) >= kPi - 1e-6) continue;
    const double gap = std::abs(log_map(q, p).norm() - distance(p, q));
    log_norm.expect(gap <= 1e-12, [&] {
      return case_tag(seed, i) + " p=" + describe(p) + " q=" + describe(q) + " gap=" + fmt(gap);
    });
  }
  return collect({&round_trip, &log_norm});
}

std::vector<PropertyResult> geometry_axioms(std::uint64_t seed, int n) {
  Rng rng(seed);
  PropertyCheck axioms("distance: d >= 0, symmetric, d <= pi, d(x, x) = 0, d(x, -x) = pi");
  PropertyCheck separation("distance: d(x, y) = 0 iff x = y");
  PropertyCheck geodesic("geodesic: endpoints, unit speed and agreement with exp");
  PropertyCheck continuity("log continuity in the base point");
  for (int i = 0; i < n; ++i) {
    const SpherePointd x = random_point(rng);
    const SpherePointd y = random_point(rng);
    const double d = distance(x, y);
    const bool ok = d >= 0 && d <= kPi && d == distance(y, x) && distance(x, x) == 0.0 &&
                    std::abs(distance(x, -x) - kPi) <= 1e-12;
    axioms.expect(ok, [&] { return case_tag(seed, i) + " x=" + describe(x) + " y=" + describe(y); });
    separation.expect((d > 0) == !same_point(x, y),
                      [&] { return case_tag(seed, i) + " x=" + describe(x) + " y=" + describe(y); });

    if (d < kPi - 1e-3 && d > 1e-6) {
      const double t1 = uniform(rng, 0.0, d);
      const double t2 = uniform(rng, 0.0, d);
      const SpherePointd g1 = geodesic_point(x, y, t1);
      const SpherePointd g2 = geodesic_point(x, y, t2);
      const SpherePointd via_exp = exp_map(t1 / d * log_map(x, y));
      const double err = std::max({distance(geodesic_point(x, y, 0.0), x), distance(geodesic_point(x, y, d), y),
                                   std::abs(distance(g1, g2) - std::abs(t1 - t2)), distance(g1, via_exp)});
      geodesic.expect(err <= 1e-9, [&] {
        return case_tag(seed, i) + " x=" + describe(x) + " y=" + describe(y) + " err=" + fmt(err);
      });
    }

    if (d < 2.5 && d > 1e-3) {
      const TangentVectord w = random_tangent(rng, x, 1.0);
      if (w.norm() < 1e-3) continue;
      const Eigen::Vector3d at_x = log_map(x, y).vec();
      bool ok_seq = true;
      for (double t : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
        const SpherePointd xn = exp_map(t * w.normalized());
        ok_seq = ok_seq && (log_map(xn, y).vec() - at_x).norm() <= 50 * t;
      }
      continuity.expect(ok_seq, [&] { return case_tag(seed, i) + " x=" + describe(x) + " y=" + describe(y); });
    }
  }
  return collect({&axioms, &separation, &geodesic, &continuity});
}

std::vector<PropertyResult> transport_properties(std::uint64_t seed, int n) {
  Rng rng(seed);
  PropertyCheck ode("closed-form transport = RK4 oracle within 1e-6");
  PropertyCheck isometry("transport preserves inner products within 1e-9");
  PropertyCheck tangency("transported vector is tangent at the target within 1e-12");
  PropertyCheck round_trip("transport p -> q -> p returns v within 1e-9");
  PropertyCheck velocity("initial velocity maps to terminal velocity within 1e-9");
  for (int i = 0; i < n; ++i) {
    const SpherePointd p = random_point(rng);
    SpherePointd q = random_point(rng);
    while (distance(p, q) > kPi - 0.05) q = random_point(rng);
    const TangentVectord u = random_tangent(rng, p, 2.0);
    const TangentVectord v = random_tangent(rng, p, 2.0);
    const TangentVectord pu = parallel_transport(u, q);
    const TangentVectord pv = parallel_transport(v, q);
    const auto tag = [&] { return case_tag(seed, i) + " p=" + describe(p) + " q=" + describe(q); };

    const double ode_err = (rk4_transport(v, q) - pv.vec()).norm();
    ode.expect(ode_err <= 1e-6, [&] { return tag() + " err=" + fmt(ode_err); });
    const double iso = std::abs(pu.dot(pv) - u.dot(v));
    isometry.expect(iso <= 1e-9, [&] { return tag() + " err=" + fmt(iso); });
    const double normal = std::abs(pv.vec().dot(q.coords()));
    tangency.expect(normal <= 1e-12, [&] { return tag() + " normal=" + fmt(normal); });
    const double back = (parallel_transport(pv, p).vec() - v.vec()).norm();
    round_trip.expect(back <= 1e-9, [&] { return tag() + " err=" + fmt(back); });
    const double vel = (parallel_transport(log_map(p, q), q).vec() + log_map(q, p).vec()).norm();
    velocity.expect(vel <= 1e-9, [&] { return tag() + " err=" + fmt(vel); });
  }
  return collect({&ode, &isometry, &tangency, &round_trip, &velocity});
}

std::vector<PropertyResult> cone_properties(std::uint64_t seed, int n) {
  Rng rng(seed);
  PropertyCheck grid("membership of alpha a + beta b for alpha, beta in {0, 0.5, 1, 2}");
  PropertyCheck polar("polar membership = brute force over 360 directions at 1 degree spacing");
  PropertyCheck bipolar("polar of polar reproduces the generators within 1e-9");
  PropertyCheck equivariance("transport equivariance of membership (coefficients within 1e-9)");
  PropertyCheck aperture("transport preserves the aperture within 1e-9");
  PropertyCheck commute("transport commutes with polar within 1e-9");
  PropertyCheck order("cone_order_lt(y, x) = strict membership of log_x y");
  PropertyCheck interior("pick_interior_polar is positive on both generators");
  for (int i = 0; i < n; ++i) {
    const SpherePointd base = random_point(rng);
    const SectorConed cone = random_cone(rng, base, 0.05, kPi - 0.05);
    const auto tag = [&] { return case_tag(seed, i) + " base=" + describe(base) + " aperture=" + fmt(cone.aperture()); };

    bool grid_ok = true;
    for (double a : {0.0, 0.5, 1.0, 2.0}) {
      for (double b : {0.0, 0.5, 1.0, 2.0}) grid_ok = grid_ok && cone_contains(cone, a * cone.gen_a() + b * cone.gen_b());
    }
    grid.expect(grid_ok, tag);

    const SectorConed pc = polar_cone(cone);
    const auto [e1, e2] = tangent_frame(base);
    bool polar_ok = true;
    for (int k = 0; k < 360; ++k) {
      const double phi = 2 * kPi * k / 360;
      const TangentVectord a = TangentVectord::Project(base, std::cos(phi) * e1 + std::sin(phi) * e2);
      polar_ok = polar_ok && cone_contains(pc, a) == polar_contains_bruteforce(cone, a, 360, 1e-9);
    }
    polar.expect(polar_ok, tag);

    const SectorConed ppc = polar_cone(pc);
    const double bi = std::max((ppc.gen_a().vec() - cone.gen_a().vec()).norm(),
                               (ppc.gen_b().vec() - cone.gen_b().vec()).norm());
    bipolar.expect(bi <= 1e-9, [&] { return tag() + " err=" + fmt(bi); });

    SpherePointd q = random_point(rng);
    while (distance(base, q) > kPi - 0.05) q = random_point(rng);
    const SectorConed moved = transport_cone(cone, q);
    const TangentVectord v = random_tangent(rng, base, 2.0);
    const auto k0 = cone.decompose(v);
    const auto k1 = moved.decompose(parallel_transport(v, q));
    const double coef = std::max(std::abs(k0.alpha - k1.alpha), std::abs(k0.beta - k1.beta));
    equivariance.expect(coef <= 1e-9, [&] { return tag() + " err=" + fmt(coef); });
    const double ap = std::abs(moved.aperture() - cone.aperture());
    aperture.expect(ap <= 1e-9, [&] { return tag() + " err=" + fmt(ap); });
    const SectorConed pm = polar_cone(moved);
    const SectorConed mp = transport_cone(pc, q);
    const double cm = std::max((pm.gen_a().vec() - mp.gen_a().vec()).norm(), (pm.gen_b().vec() - mp.gen_b().vec()).norm());
    commute.expect(cm <= 1e-9, [&] { return tag() + " err=" + fmt(cm); });

    SpherePointd y = random_point(rng);
    while (distance(base, y) > kPi - 0.05) y = random_point(rng);
    order.expect(cone_order_lt(y, base, cone) == cone_contains_strict(cone, log_map(base, y)), tag);

    const TangentVectord pi = pick_interior_polar(cone);
    interior.expect(pi.dot(cone.gen_a()) > 0 && pi.dot(cone.gen_b()) > 0, tag);
  }
  return collect({&grid, &polar, &bipolar, &equivariance, &aperture, &commute, &order, &interior});
}

std::vector<PropertyResult> oriented_distance_properties(std::uint64_t seed, int n) {
  Rng rng(seed);
  constexpr double kSlack = 1e-9;
  std::vector<PropertyResult> out;

  // Scalar case A = R+.
  {
    PropertyCheck items("Delta_{R+}: sign, boundary, 1-Lipschitz, homogeneity, convexity, monotonicity");
    for (int i = 0; i < n; ++i) {
      const double s1 = uniform(rng, -5, 5);
      const double s2 = uniform(rng, -5, 5);
      const double d1 = oriented_distance_halfline(s1);
      const double d2 = oriented_distance_halfline(s2);
      const double t = uniform(rng, 0, 1);
      // the definition evaluated directly: distance to [0, inf) minus distance to (-inf, 0]
      const double by_definition = std::max(-s1, 0.0) - std::max(s1, 0.0);
      bool ok = std::isfinite(d1) && std::abs(d1 - d2) <= std::abs(s1 - s2) + kSlack &&
                std::abs(d1 - by_definition) <= kSlack && oriented_distance_halfline(0.0) == 0.0 &&
                ((s1 > 0) == (d1 < 0)) && ((s1 < 0) == (d1 > 0));
      for (double h : {0.5, 2.0, 10.0}) ok = ok && std::abs(oriented_distance_halfline(h * s1) - h * d1) <= kSlack;
      ok = ok && oriented_distance_halfline((1 - t) * s1 + t * s2) <= (1 - t) * d1 + t * d2 + kSlack;
      if (s1 - s2 >= 0) ok = ok && d1 <= d2 + kSlack;
      items.expect(ok, [&] { return case_tag(seed, i) + " s1=" + fmt(s1) + " s2=" + fmt(s2); });
    }
    out.push_back(items.result());
  }

  // Orthant R+^3.
  {
    PropertyCheck items("Delta_{R+^3}: sign, boundary, 1-Lipschitz, homogeneity, convexity, monotonicity, oracle");
    for (int i = 0; i < n; ++i) {
      const Eigen::VectorXd y1 = random_vector(rng, 3, -2, 2);
      const Eigen::VectorXd y2 = random_vector(rng, 3, -2, 2);
      const Eigen::VectorXd inside = random_vector(rng, 3, 0.05, 2);
      Eigen::VectorXd boundary = random_vector(rng, 3, 0, 2);
      boundary[i % 3] = 0.0;
      const double d1 = oriented_distance_orthant(y1);
      const double d2 = oriented_distance_orthant(y2);
      const double t = uniform(rng, 0, 1);
      bool ok = std::isfinite(d1) && std::abs(d1 - d2) <= (y1 - y2).norm() + kSlack &&
                oriented_distance_orthant(inside) < 0 && std::abs(oriented_distance_orthant(boundary)) <= kSlack &&
                std::abs(d1 - orthant_oriented_distance(y1)) <= kSlack;
      if ((y1.array() < 0).any()) ok = ok && d1 > 0;
      for (double h : {0.5, 2.0, 10.0}) {
        ok = ok && std::abs(oriented_distance_orthant(Eigen::VectorXd(h * y1)) - h * d1) <= kSlack;
      }
      ok = ok && oriented_distance_orthant(Eigen::VectorXd((1 - t) * y1 + t * y2)) <= (1 - t) * d1 + t * d2 + kSlack;
      const Eigen::VectorXd above = y2 + inside;
      ok = ok && oriented_distance_orthant(above) <= d2 + kSlack;
      items.expect(ok, [&] { return case_tag(seed, i) + " y1=" + describe(y1) + " y2=" + describe(y2); });
    }
    out.push_back(items.result());
  }

  // Five sector geometries.
  const double apertures[] = {0.25, 1.0, kPi / 2, 2.2, 3.0};
  for (double aperture : apertures) {
    const SpherePointd base = random_point(rng);
    const SectorConed cone = random_cone(rng, base, aperture, aperture);
    PropertyCheck items("Delta_sector(aperture " + fmt(aperture) +
                        "): sign, boundary, 1-Lipschitz, homogeneity, convexity, monotonicity, oracle");
    for (int i = 0; i < n; ++i) {
      const TangentVectord y1 = random_tangent(rng, base, 3.0);
      const TangentVectord y2 = random_tangent(rng, base, 3.0);
      const TangentVectord inside = uniform(rng, 0.05, 2) * cone.gen_a() + uniform(rng, 0.05, 2) * cone.gen_b();
      const TangentVectord boundary = uniform(rng, 0, 2) * (i % 2 ? cone.gen_a() : cone.gen_b());
      const double d1 = oriented_distance_sector(cone, y1);
      const double d2 = oriented_distance_sector(cone, y2);
      const double t = uniform(rng, 0, 1);
      const auto k1 = cone.decompose(y1);
      bool ok = std::isfinite(d1) && std::abs(d1 - d2) <= (y1 - y2).norm() + kSlack &&
                oriented_distance_sector(cone, inside) < 0 &&
                std::abs(oriented_distance_sector(cone, boundary)) <= kSlack;
      if (std::min(k1.alpha, k1.beta) < -1e-6) ok = ok && d1 > 0;
      for (double h : {0.5, 2.0, 10.0}) ok = ok && std::abs(oriented_distance_sector(cone, h * y1) - h * d1) <= kSlack;
      ok = ok && oriented_distance_sector(cone, (1 - t) * y1 + t * y2) <= (1 - t) * d1 + t * d2 + kSlack;
      ok = ok && oriented_distance_sector(cone, y2 + inside) <= d2 + kSlack;
      if (i < 100) ok = ok && std::abs(d1 - dense_oriented_distance(cone, y1)) <= 1e-3 * (1 + y1.norm());
      items.expect(ok, [&] {
        return case_tag(seed, i) + " y1=" + describe(Eigen::VectorXd(y1.vec())) +
               " y2=" + describe(Eigen::VectorXd(y2.vec()));
      });
    }
    out.push_back(items.result());
  }
  return out;
}

std::vector<PropertyResult> gerstewitz_properties(std::uint64_t seed, int n) {
  Rng rng(seed);
  PropertyCheck oracle("closed form = bisection oracle within 1e-10");
  PropertyCheck levels("level sets: xi < r, xi <= r, xi = r match the componentwise predicates (tol 1e-12)");
  PropertyCheck convex("convexity along segments");
  PropertyCheck subadditive("subadditivity xi(v + w) <= xi(v) + xi(w)");
  PropertyCheck lipschitz("Lipschitz with constant max 1/|q_i| in the max norm");
  PropertyCheck monotone("monotonicity: v - w >= 0 implies xi(v) <= xi(w)");
  PropertyCheck translation("xi(v + t q) = xi(v) + t and xi(h v) = h xi(v)");
  constexpr double kTol = 1e-12;
  for (int i = 0; i < n; ++i) {
    const Eigen::Index l = 1 + i % 4;
    const Eigen::VectorXd q = random_vector(rng, l, -5.0, -0.1);
    const OrthantParamsd params(q);
    const Eigen::VectorXd v = random_vector(rng, l, -10, 10);
    const Eigen::VectorXd w = random_vector(rng, l, -10, 10);
    const double xv = gerstewitz(v, params);
    const double xw = gerstewitz(w, params);
    const auto tag = [&] { return case_tag(seed, i) + " v=" + describe(v) + " q=" + describe(q); };

    const double bis = bisection_gerstewitz(v, q);
    oracle.expect(std::abs(xv - bis) <= 1e-10, [&] { return tag() + " closed=" + fmt(xv) + " bisection=" + fmt(bis); });

    const double scale = std::max(1.0, std::abs(xv));
    const double r = i % 3 == 0 ? xv : xv + uniform(rng, -1, 1);
    const Eigen::ArrayXd slack = (v - r * q).array();
    bool level_ok = true;
    if (std::abs(xv - r) > kTol * scale) {
      level_ok = (xv < r) == (slack > 0).all() && (xv <= r) == (slack >= 0).all();
    } else {
      level_ok = std::abs(slack.minCoeff()) <= kTol * scale * (1 + q.cwiseAbs().maxCoeff());
    }
    levels.expect(level_ok, [&] { return tag() + " r=" + fmt(r); });

    const double t = uniform(rng, 0, 1);
    convex.expect(gerstewitz(Eigen::VectorXd((1 - t) * v + t * w), params) <= (1 - t) * xv + t * xw + kTol * 100,
                  tag);
    subadditive.expect(gerstewitz(Eigen::VectorXd(v + w), params) <= xv + xw + kTol * 100, tag);
    const double lip = q.cwiseAbs().cwiseInverse().maxCoeff();
    lipschitz.expect(std::abs(xv - xw) <= lip * (v - w).cwiseAbs().maxCoeff() + kTol * 100, tag);
    const Eigen::VectorXd above = w + random_vector(rng, l, 0, 3);
    monotone.expect(gerstewitz(above, params) <= xw + kTol * 100, tag);
    const double s = uniform(rng, -3, 3);
    const double h = uniform(rng, 0.1, 5);
    translation.expect(std::abs(gerstewitz(Eigen::VectorXd(v + s * q), params) - (xv + s)) <= 1e-9 &&
                           std::abs(gerstewitz(Eigen::VectorXd(h * v), params) - h * xv) <= 1e-9,
                       tag);
  }
  return collect({&oracle, &levels, &convex, &subadditive, &lipschitz, &monotone, &translation});
}

std::vector<PropertyResult> theorem_equivalence(std::uint64_t seed, int instances, int ys, Resolution resolution) {
  Rng rng(seed);
  PropertyCheck agree("efficiency: brute force = H and K disjoint = H and extended image disjoint");
  PropertyCheck witness("non-disjointness witness maps back to an efficiency violator");
  InstanceOptions options;
  options.resolution = resolution;
  for (int i = 0; i < instances; ++i) {
    const GopInstance inst = random_instance(rng, options);
    auto candidates = pick_candidates(rng, inst, ys - ys / 2);
    for (int k = 0; k < ys / 2; ++k) {
      // scalarization outputs are usually efficient, balancing the sample
      const SpherePointd y0 = pick_candidates(rng, inst, 1).front();
      candidates.push_back(solve_gop_via_scalarization(inst, y0, {resolution, 1e-9, 8}).x_star);
    }
    for (std::size_t k = 0; k < candidates.size(); ++k) {
      const SpherePointd& y = candidates[k];
      const auto cloud = image_cloud(inst, y, resolution);
      const bool brute = brute_force_efficient(inst, y, resolution).efficient;
      const auto hk = check_disjoint_H_K(inst, y, cloud);
      const bool extended = check_disjoint_H_extended(inst, y, cloud).disjoint;
      agree.expect(brute == hk.disjoint && brute == extended, [&] {
        return case_tag(seed, i) + " y=" + describe(y) + " brute=" + fmt(brute) + " HK=" + fmt(hk.disjoint) +
               " ext=" + fmt(extended);
      });
      if (!hk.disjoint) {
        const SpherePointd fy = evaluate_objective(inst, y);
        const SectorConed cone = transport_cone(inst.ref_cone, fy);
        const SpherePointd& x = hk.witness->source;
        witness.expect(is_feasible(inst, x) && cone_order_lt(evaluate_objective(inst, x), fy, cone),
                       [&] { return case_tag(seed, i) + " y=" + describe(y) + " x=" + describe(x); });
      }
    }
  }
  return collect({&agree, &witness});
}

std::vector<PropertyResult> euclidean_limit(std::uint64_t seed, int instances, int ys) {
  Rng rng(seed);
  PropertyCheck flat("tiny patch: brute force efficiency = flat chart brute force");
  InstanceOptions options;
  options.identity_only = true;
  options.ref_at_center = true;
  options.min_radius = 1e-3;
  options.max_radius = 1e-3;
  options.resolution = {10, 24};
  for (int i = 0; i < instances; ++i) {
    const GopInstance inst = random_instance(rng, options);
    for (const auto& y : pick_candidates(rng, inst, ys)) {
      const bool curved = brute_force_efficient(inst, y, options.resolution).efficient;
      const bool euclid = flat_efficient(inst, y, options.resolution);
      flat.expect(curved == euclid, [&] { return case_tag(seed, i) + " y=" + describe(y); });
    }
  }
  return collect({&flat});
}

std::vector<PropertyResult> separator_properties(std::uint64_t seed, int n) {
  Rng rng(seed);
  PropertyCheck sep1("outside H: find_separator_omega1 gives omega1 <= 1e-12");
  PropertyCheck sep2("outside H: find_separator_omega2 gives omega2 <= 1e-12");
  PropertyCheck pos1("inside H: omega1 >= -1e-12 for sampled (theta, lambda)");
  PropertyCheck pos2("inside H: omega2 >= -1e-12 for sampled (phi, gamma)");
  const double tol = kMembershipTolerance;
  for (int i = 0; i < n; ++i) {
    const SpherePointd base = random_point(rng);
    const SectorConed cone = random_cone(rng, base);
    const SectorConed polar = polar_cone(cone);
    const Eigen::Index l = 1 + i % 3;
    const auto tag = [&](const ImagePoint& pt) {
      return case_tag(seed, i) + " base=" + describe(base) + " u=" + describe(Eigen::VectorXd(pt.u.vec())) +
             " v=" + describe(pt.v);
    };

    // Points outside H: alternate between u outside C and v with a negative entry.
    ImagePoint out{random_tangent(rng, base, 2.0), random_vector(rng, l, -1, 1), base};
    if (i % 2 == 0) {
      out.u = uniform(rng, 0, 2) * cone.gen_a() + uniform(rng, 0, 2) * cone.gen_b();
      out.v[i % l] = -uniform(rng, 1e-6, 1);
    }
    while (cone_contains_strict(cone, out.u, tol) && (out.v.array() >= -tol).all()) {
      out.u = random_tangent(rng, base, 2.0);
    }
    {
      const double w1 = omega1(out, find_separator_omega1(out, cone, tol));
      sep1.expect(w1 <= 1e-12, [&] { return tag(out) + " omega1=" + fmt(w1); });
      const double w2 = omega2(out, find_separator_omega2(out, cone, tol));
      sep2.expect(w2 <= 1e-12, [&] { return tag(out) + " omega2=" + fmt(w2); });
    }

    // Points inside H with random admissible parameters.
    const ImagePoint in{uniform(rng, 0, 2) * cone.gen_a() + uniform(rng, 0.01, 2) * cone.gen_b(),
                        random_vector(rng, l, 0, 2), base};
    for (int k = 0; k < 4; ++k) {
      const TangentVectord theta = uniform(rng, 0.01, 5) * sector_direction(polar, uniform(rng, 0, 1));
      const Eigen::VectorXd lambda = random_vector(rng, l, 0, 5);
      const double w1 = omega1(in, {theta, lambda});
      pos1.expect(w1 >= -1e-12, [&] { return tag(in) + " omega1=" + fmt(w1); });
      const TangentVectord phi = k == 0 ? TangentVectord::Zero(base)
                                        : uniform(rng, 0, 5) * sector_direction(polar, uniform(rng, 0, 1));
      const Eigen::VectorXd gamma = k == 1 ? Eigen::VectorXd::Zero(l) : random_vector(rng, l, -5, -0.01);
      const double w2 = omega2(in, {phi, gamma});
      pos2.expect(w2 >= -1e-12, [&] { return tag(in) + " omega2=" + fmt(w2); });
    }
  }
  return collect({&sep1, &sep2, &pos1, &pos2});
}

std::vector<PropertyResult> certificate_properties(std::uint64_t seed, int instances, int ys) {
  Rng rng(seed);
  PropertyCheck sound1("linear certificate implies brute-force efficiency");
  PropertyCheck sound2("nonlinear certificate implies brute-force efficiency");
  PropertyCheck gap("Omega <= tau_cert iff a linear certificate exists on the same grids");
  PropertyCheck dual("dual value >= -tau for feasible y");
  for (int i = 0; i < instances; ++i) {
    const GopInstance inst = random_instance(rng);
    auto candidates = pick_candidates(rng, inst, ys);
    candidates.push_back(
        solve_gop_via_scalarization(inst, candidates.front(), {inst.resolution, 1e-9, 8}).x_star);
    for (const auto& y : candidates) {
      const auto tag = [&] { return case_tag(seed, i) + " y=" + describe(y); };
      const auto cloud = image_cloud(inst, y, inst.resolution);
      const bool efficient = brute_force_efficient(inst, y, inst.resolution).efficient;
      const auto c1 = certificate_search(inst, y, SeparationFamily::kLinear, cloud, inst.grid, inst.resolution);
      const auto c2 = certificate_search(inst, y, SeparationFamily::kNonlinear, cloud, inst.grid, inst.resolution);
      if (c1) sound1.expect(efficient, tag);
      if (c2) sound2.expect(efficient, tag);
      const ImageFrame frame = image_frame(inst, y);
      const auto lambdas = lambda_grid(inst.grid, inst.num_constraints());
      const auto report = duality_gap(inst, y, polar_directions(frame.cone, inst.grid.n_angle), lambdas, cloud);
      gap.expect((report.omega <= inst.tolerances.certificate) == c1.has_value(),
                 [&] { return tag() + " omega=" + fmt(report.omega); });
      const double dv = dual_value(inst, y, report.argmin, cloud);
      dual.expect(dv >= -1e-9 * (1 + report.argmin.lambda.sum()), [&] { return tag() + " dual=" + fmt(dv); });
    }
  }
  return collect({&sound1, &sound2, &gap, &dual});
}

std::vector<PropertyResult> scalarization_containments(std::uint64_t seed, int instances, int ys) {
  Rng rng(seed);
  PropertyCheck self("y in G(y) and y in G_p(y)");
  PropertyCheck nested("G(y) subset of G_p(y) on all samples");
  const double tol = 1e-9;
  for (int i = 0; i < instances; ++i) {
    const GopInstance inst = random_instance(rng);
    const auto samples = sample_patch(inst.patch, inst.resolution.radial, inst.resolution.angular);
    for (int k = 0; k < ys; ++k) {
      const SpherePointd y = random_point_in_patch(rng, inst.patch);
      const TangentVectord p = scalarizing_vector(inst, y);
      const auto tag = [&] { return case_tag(seed, i) + " y=" + describe(y); };
      self.expect(in_G(inst, y, y, tol) && in_Gp(inst, y, y, p, tol), tag);
      bool ok = true;
      for (const auto& x : samples) {
        if (in_G(inst, y, x, tol) && !in_Gp(inst, y, x, p, tol)) {
          ok = false;
          break;
        }
      }
      nested.expect(ok, tag);
    }
  }
  return collect({&self, &nested});
}

std::vector<PropertyResult> scalarization_procedure(std::uint64_t seed, int instances) {
  Rng rng(seed);
  PropertyCheck certified("solve_gop_via_scalarization: every certified run is stable");
  PropertyCheck reported("solve_gop_via_scalarization: every uncertified run reports the non-stabilizing trace");
  PropertyCheck argmin("quasi-min postcondition: no sampled x in K and G(y) has a smaller value");
  PropertyCheck three_way("identity objective: quasi-min minimality = no x with log in C and <p, u> > 0 = efficiency");
  PropertyCheck nesting("identity objective: G(x0) subset of G(y0) on the grid");
  PropertyCheck c_function("near-flat identity patch: C-function defect in C within 1e-4");
  PropertyCheck convexity("identity objective: geodesic midpoints of G(y) members stay in G(y)");
  const double tol = 1e-9;
  for (int i = 0; i < instances; ++i) {
    InstanceOptions options;
    options.identity_only = i % 2 == 0;
    const GopInstance inst = random_instance(rng, options);
    const SpherePointd y0 = pick_candidates(rng, inst, 1).front();
    const auto tag = [&] { return case_tag(seed, i) + " y0=" + describe(y0); };

    const auto result = solve_gop_via_scalarization(inst, y0, {inst.resolution, tol, 8});
    certified.expect(!result.certified || result.stable, tag);
    reported.expect(result.certified || (!result.warnings.empty() && result.trace.size() > 1), tag);

    const TangentVectord p = scalarizing_vector(inst, y0);
    const auto best = solve_quasi_min(inst, y0, p, inst.resolution, tol);
    const ImageFrame frame = image_frame(inst, y0);
    bool argmin_ok = true;
    bool strict_improvement = false;
    for (const auto& x : scan_points(inst, y0, inst.resolution)) {
      if (!is_feasible(inst, x)) continue;
      const TangentVectord u = log_map(frame.fy, evaluate_objective(inst, x));
      if (!cone_contains(frame.cone, u, tol)) continue;
      argmin_ok = argmin_ok && -p.dot(u) >= best.value - tol;
      strict_improvement = strict_improvement || (cone_contains_strict(frame.cone, u, tol) && p.dot(u) > tol);
    }
    argmin.expect(argmin_ok, tag);

    if (options.identity_only) {
      const bool minimal = best.value >= -tol;
      const bool efficient = brute_force_efficient(inst, y0, inst.resolution).efficient;
      three_way.expect(minimal == !strict_improvement && minimal == efficient, [&] {
        return tag() + " minimal=" + fmt(minimal) + " no_improvement=" + fmt(!strict_improvement) +
               " efficient=" + fmt(efficient);
      });
      nesting.expect(check_nesting(inst, y0, best.x_best, scan_points(inst, y0, {40, 72}), tol), tag);

      std::vector<SpherePointd> members;
      for (const auto& x : sample_patch(inst.patch, 8, 16)) {
        if (in_G(inst, y0, x, 0.0)) members.push_back(x);
      }
      std::vector<std::pair<SpherePointd, SpherePointd>> pairs;
      for (std::size_t a = 0; a + 1 < members.size(); a += 3) pairs.emplace_back(members[a], members[a + 1]);
      for (const auto& pair : pairs) {
        if (!check_C_function(inst, y0, {pair}, {0.25, 0.5, 0.75}, tol)) continue;
        const auto& [x1, x2] = pair;
        const SpherePointd mid = geodesic_point(x1, x2, distance(x1, x2) / 2);
        convexity.expect(in_G(inst, y0, mid, 1e-9),
                         [&] { return tag() + " x1=" + describe(x1) + " x2=" + describe(x2); });
      }
    }

    InstanceOptions flat_options;
    flat_options.identity_only = true;
    flat_options.min_radius = 1e-2;
    flat_options.max_radius = 1e-2;
    flat_options.resolution = {6, 12};
    const GopInstance flat = random_instance(rng, flat_options);
    const auto grid = sample_patch(flat.patch, 6, 12);
    const SpherePointd fy = grid[std::uniform_int_distribution<std::size_t>(0, grid.size() - 1)(rng)];
    std::vector<std::pair<SpherePointd, SpherePointd>> pairs;
    for (std::size_t a = 0; a + 7 < grid.size(); a += 5) pairs.emplace_back(grid[a], grid[a + 7]);
    c_function.expect(check_C_function(flat, fy, pairs, {0.0, 0.25, 0.5, 0.75, 1.0}, 1e-4), tag);
  }
  return collect({&certified, &reported, &argmin, &three_way, &nesting, &c_function, &convexity});
}

std::optional<Suite> parse_suite(const std::string& name) {
  if (name == "geometry") return Suite::kGeometry;
  if (name == "delta") return Suite::kDelta;
  if (name == "gerstewitz") return Suite::kGerstewitz;
  if (name == "isa") return Suite::kIsa;
  if (name == "scalarization") return Suite::kScalarization;
  if (name == "all") return Suite::kAll;
  return std::nullopt;
}

std::vector<PropertyResult> run_suite(Suite suite, std::uint64_t seed) {
  std::vector<PropertyResult> out;
  const bool all = suite == Suite::kAll;
  if (all || suite == Suite::kGeometry) {
    append(out, geometry_round_trip(seed));
    append(out, geometry_axioms(seed + 1));
    append(out, transport_properties(seed + 2));
    append(out, cone_properties(seed + 3));
  }
  if (all || suite == Suite::kDelta) append(out, oriented_distance_properties(seed + 4));
  if (all || suite == Suite::kGerstewitz) append(out, gerstewitz_properties(seed + 5));
  if (all || suite == Suite::kIsa) {
    append(out, theorem_equivalence(seed + 6));
    append(out, euclidean_limit(seed + 7));
    append(out, separator_properties(seed + 8));
    append(out, certificate_properties(seed + 9));
  }
  if (all || suite == Suite::kScalarization) {
    append(out, scalarization_containments(seed + 10));
    append(out, scalarization_procedure(seed + 11));
  }
  return out;
}

}  // namespace sgop::verify
