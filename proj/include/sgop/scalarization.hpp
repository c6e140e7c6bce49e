#pragma once

// Scalarization of the cone-ordered problem: the sets G(y) and G_p(y), the
// C_{f(y)}-function check, the quasi-minimum problem and the solve-then-resolve
// procedure. Orientation: x is in G(y) when log_{f(y)} f(x) lies in C_{f(y)},
// i.e. f(x) is at least as good as f(y) in the cone order.

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "sgop/gop.hpp"

namespace sgop {

/// x in G(y): log_{f(y)} f(x) in C_{f(y)} (closed cone).
bool in_G(const GopInstance& inst, const SpherePointd& y, const SpherePointd& x, double tol);

/// x in G_p(y): <p, log_{f(y)} f(x)> >= -tol, p based at f(y).
bool in_Gp(const GopInstance& inst, const SpherePointd& y, const SpherePointd& x,
           const TangentVectord& p, double tol);

/// Scalarizing vector at f(y): the polar bisector, or inst.scalarization.p
/// transported from the reference point. Throws PreconditionError unless it is
/// interior to C*_{f(y)}.
TangentVectord scalarizing_vector(const GopInstance& inst, const SpherePointd& y);

/// Convex-combination defect check over sample pairs; the chord combination is
/// renormalized to the sphere before taking log.
bool check_C_function(const GopInstance& inst, const SpherePointd& y,
                      const std::vector<std::pair<SpherePointd, SpherePointd>>& pairs,
                      const std::vector<double>& alphas, double tol);

struct QuasiMinResult {
  SpherePointd x_best;
  /// -<p, log_{f(y)} f(x_best)>; 0 when x_best = y.
  double value = 0.0;
  std::size_t feasible_count = 0;
};

/// Minimizes -<p, log_{f(y)} f(x)> over sampled x in K and G(y); first index
/// wins ties. Throws EmptyFeasibleRegionError if no sample qualifies.
QuasiMinResult solve_quasi_min(const GopInstance& inst, const SpherePointd& y,
                               const TangentVectord& p, const Resolution& resolution, double tol);

struct ScalarizationRound {
  SpherePointd y;
  QuasiMinResult solve;
  /// The solve moved strictly below -tol, i.e. y was not yet stable.
  bool improved = false;
};

struct ScalarizationResult {
  SpherePointd x_star;
  bool certified = false;
  bool stable = false;
  std::vector<ScalarizationRound> trace;
  std::vector<std::string> warnings;
};

struct ScalarizationConfig {
  Resolution resolution;
  double tol = 1e-9;
  int max_rounds = 8;
};

/// Solves the quasi-minimum problem at y0, then re-solves at each new point
/// until the solution is stable; certifies the result by brute force.
ScalarizationResult solve_gop_via_scalarization(const GopInstance& inst, const SpherePointd& y0,
                                                const ScalarizationConfig& config);

enum class NestingMode {
  /// G(x0) evaluated in the chart at f(y0).
  kChart,
  /// G(x0) based at f(x0).
  kIntrinsic,
};

/// Every sampled member of G(x0) is a member of G(y0) within tol.
/// Throws PreconditionError unless x0 is in G(y0).
bool check_nesting(const GopInstance& inst, const SpherePointd& y0, const SpherePointd& x0,
                   const std::vector<SpherePointd>& samples, double tol,
                   NestingMode mode = NestingMode::kChart);

}  // namespace sgop
