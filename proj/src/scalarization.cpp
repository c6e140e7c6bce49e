#include "sgop/scalarization.hpp"

#include <optional>
#include <string>

#include "sgop/errors.hpp"

namespace sgop {

namespace {

TangentVectord image_u(const GopInstance& inst, const ImageFrame& frame, const SpherePointd& x) {
  return log_map(frame.fy, evaluate_objective(inst, x), inst.tolerances.antipodal);
}

void require_interior(const SectorConed& cone, const TangentVectord& p, double tol) {
  if (!(p.dot(cone.gen_a()) > tol && p.dot(cone.gen_b()) > tol)) {
    throw PreconditionError("scalarizing vector must lie in the interior of the polar cone");
  }
}

}  // namespace

bool in_G(const GopInstance& inst, const SpherePointd& y, const SpherePointd& x, double tol) {
  const ImageFrame frame = image_frame(inst, y);
  return cone_contains(frame.cone, image_u(inst, frame, x), tol);
}

bool in_Gp(const GopInstance& inst, const SpherePointd& y, const SpherePointd& x,
           const TangentVectord& p, double tol) {
  const ImageFrame frame = image_frame(inst, y);
  if (!same_point(p.base(), frame.fy)) throw BaseMismatchError("in_Gp: p is not based at f(y)");
  return p.dot(image_u(inst, frame, x)) >= -tol;
}

TangentVectord scalarizing_vector(const GopInstance& inst, const SpherePointd& y) {
  const ImageFrame frame = image_frame(inst, y);
  if (!inst.scalarization.p) return pick_interior_polar(frame.cone);
  const TangentVectord at_ref(inst.ref_point(), *inst.scalarization.p);
  const TangentVectord p = parallel_transport(at_ref, frame.fy, inst.tolerances.antipodal);
  require_interior(frame.cone, p, inst.scalarization.tol);
  return p;
}

bool check_C_function(const GopInstance& inst, const SpherePointd& y,
                      const std::vector<std::pair<SpherePointd, SpherePointd>>& pairs,
                      const std::vector<double>& alphas, double tol) {
  const ImageFrame frame = image_frame(inst, y);
  for (const auto& [x1, x2] : pairs) {
    const SpherePointd f1 = evaluate_objective(inst, x1);
    const SpherePointd f2 = evaluate_objective(inst, x2);
    const TangentVectord u1 = log_map(frame.fy, f1, inst.tolerances.antipodal);
    const TangentVectord u2 = log_map(frame.fy, f2, inst.tolerances.antipodal);
    for (double alpha : alphas) {
      if (!(alpha >= 0.0 && alpha <= 1.0)) throw PreconditionError("check_C_function: alpha outside [0, 1]");
      const SpherePointd mix((1.0 - alpha) * f1.coords() + alpha * f2.coords());
      const TangentVectord defect =
          log_map(frame.fy, mix, inst.tolerances.antipodal) - ((1.0 - alpha) * u1 + alpha * u2);
      if (!cone_contains(frame.cone, defect, tol)) return false;
    }
  }
  return true;
}

QuasiMinResult solve_quasi_min(const GopInstance& inst, const SpherePointd& y,
                               const TangentVectord& p, const Resolution& resolution, double tol) {
  const ImageFrame frame = image_frame(inst, y);
  if (!same_point(p.base(), frame.fy)) throw BaseMismatchError("solve_quasi_min: p is not based at f(y)");
  require_interior(frame.cone, p, tol);

  std::optional<QuasiMinResult> best;
  std::size_t count = 0;
  for (const auto& x : scan_points(inst, y, resolution)) {
    if (!is_feasible(inst, x)) continue;
    const TangentVectord u = image_u(inst, frame, x);
    if (!cone_contains(frame.cone, u, tol)) continue;
    ++count;
    const double value = -p.dot(u);
    if (!best || value < best->value) best = QuasiMinResult{x, value, 0};
  }
  if (!best) throw EmptyFeasibleRegionError("no sampled point lies in K and G(y)");
  best->feasible_count = count;
  return *best;
}

ScalarizationResult solve_gop_via_scalarization(const GopInstance& inst, const SpherePointd& y0,
                                                const ScalarizationConfig& config) {
  require_feasible(inst, y0);
  if (config.max_rounds < 1) throw PreconditionError("max_rounds must be >= 1");
  ScalarizationResult result{y0, false, false, {}, {}};
  SpherePointd y = y0;
  for (int round = 0; round <= config.max_rounds; ++round) {
    const TangentVectord p = scalarizing_vector(inst, y);
    const QuasiMinResult solve = solve_quasi_min(inst, y, p, config.resolution, config.tol);
    const bool improved = solve.value < -config.tol;
    result.trace.push_back({y, solve, improved});
    if (round > 0 && !improved) {
      result.stable = true;
      result.x_star = y;
      break;
    }
    if (round > 0) {
      result.warnings.push_back("re-solve at round " + std::to_string(round) + " improved by " +
                                std::to_string(-solve.value) + " (resolution artifact)");
    }
    y = solve.x_best;
    result.x_star = y;
  }
  result.certified = brute_force_efficient(inst, result.x_star, config.resolution).efficient;
  return result;
}

bool check_nesting(const GopInstance& inst, const SpherePointd& y0, const SpherePointd& x0,
                   const std::vector<SpherePointd>& samples, double tol, NestingMode mode) {
  if (!in_G(inst, y0, x0, tol)) throw PreconditionError("check_nesting: x0 must lie in G(y0)");
  const ImageFrame frame = image_frame(inst, y0);
  const TangentVectord u0 = image_u(inst, frame, x0);
  for (const auto& x : samples) {
    const TangentVectord u = image_u(inst, frame, x);
    const bool in_G_x0 = mode == NestingMode::kChart ? cone_contains(frame.cone, u - u0, 0.0)
                                                     : in_G(inst, x0, x, 0.0);
    if (in_G_x0 && !cone_contains(frame.cone, u, tol)) return false;
  }
  return true;
}

}  // namespace sgop
