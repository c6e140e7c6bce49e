#pragma once

// Cone-ordered optimization problems on a spherical patch and their image
// space: the image map M_y(x) = (log_{f(y)} f(x), g(x)), the sets H(y),
// K(y) (sampled) and the extended image, and grid-level efficiency checks.

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "sgop/cones.hpp"
#include "sgop/sphere.hpp"

namespace sgop {

struct IdentityObjective {};

/// f(x) = R x with R the rotation by `angle` about `axis`.
struct RotationObjective {
  Eigen::Vector3d axis;
  double angle = 0.0;
};

/// f(x) = exp_x(t log_x anchor): moves x a fraction t of the way to `anchor`.
struct PullObjective {
  SpherePointd anchor;
  double t = 0.0;
};

using ObjectiveSpec = std::variant<IdentityObjective, RotationObjective, PullObjective>;

/// g_i(x) = radius - d(x, center)
struct BallConstraint {
  SpherePointd center;
  double radius = 0.0;
};

/// g_i(x) = <normal, x> - offset
struct AffineConstraint {
  Eigen::Vector3d normal;
  double offset = 0.0;
};

using ConstraintTerm = std::variant<BallConstraint, AffineConstraint>;

struct Tolerances {
  double membership = 1e-9;
  double feasibility = 1e-9;
  double antipodal = 1e-9;
  double certificate = 1e-9;
};

struct Resolution {
  int radial = 20;
  int angular = 36;

  bool operator==(const Resolution&) const = default;
};

/// Parameter grids used by the separation searches.
struct SearchGrid {
  int n_angle = 64;
  std::vector<double> lambda_levels{0.0, 0.25, 0.5, 1.0};
  std::vector<double> lambda_scales{1.0, 10.0};
  std::vector<double> gamma_levels{-0.25, -1.0, -4.0};
};

struct ScalarizationSettings {
  /// Scalarizing vector at the reference point; empty means the polar bisector.
  std::optional<Eigen::Vector3d> p;
  std::optional<SpherePointd> y0;
  double tol = 1e-9;
  int max_rounds = 8;
};

struct GopInstance {
  Patchd patch;
  /// C_p; its base point is the reference point p.
  SectorConed ref_cone;
  ObjectiveSpec objective;
  std::vector<ConstraintTerm> constraints;
  Tolerances tolerances;
  Resolution resolution;
  SearchGrid grid;
  ScalarizationSettings scalarization;
  /// Default candidate y for commands that take one.
  std::optional<SpherePointd> candidate;

  const SpherePointd& ref_point() const { return ref_cone.base(); }
  Eigen::Index num_constraints() const { return static_cast<Eigen::Index>(constraints.size()); }
};

/// Checks the instance invariants (reference point in the patch, objective
/// parameters, l >= 1, nonempty sampled feasible set). Throws PreconditionError.
void validate_instance(const GopInstance& inst);

SpherePointd evaluate_objective(const GopInstance& inst, const SpherePointd& x);
Eigen::VectorXd evaluate_constraints(const GopInstance& inst, const SpherePointd& x);
bool is_feasible(const GopInstance& inst, const SpherePointd& x);

/// f(y) together with the transported cone C_{f(y)}.
struct ImageFrame {
  SpherePointd fy;
  SectorConed cone;
};

ImageFrame image_frame(const GopInstance& inst, const SpherePointd& y);

struct ImagePoint {
  TangentVectord u;
  Eigen::VectorXd v;
  /// The x this point was generated from.
  SpherePointd source;
};

ImagePoint image_map(const GopInstance& inst, const SpherePointd& y, const SpherePointd& x);
ImagePoint image_map(const GopInstance& inst, const ImageFrame& frame, const SpherePointd& x);

/// (u, v) in H(y): u in C_{f(y)} \ {0} and v >= 0 componentwise.
bool in_H(const GopInstance& inst, const SpherePointd& y, const ImagePoint& pt);
bool in_H(const GopInstance& inst, const ImageFrame& frame, const ImagePoint& pt);

/// Grid points of the patch, with y appended when it is not itself a grid point.
std::vector<SpherePointd> scan_points(const GopInstance& inst, const SpherePointd& y,
                                      const Resolution& resolution);

/// Sampled K(y): image_map over scan_points, in the same order.
std::vector<ImagePoint> image_cloud(const GopInstance& inst, const SpherePointd& y,
                                    const Resolution& resolution, unsigned threads = 1);

/// pt in K - cl H: some cloud element (u_x, v_x) has u_x - pt.u in C and pt.v <= v_x.
bool in_extended_image(const GopInstance& inst, const SpherePointd& y, const ImagePoint& pt,
                       const std::vector<ImagePoint>& cloud);
bool in_extended_image(const GopInstance& inst, const ImageFrame& frame, const ImagePoint& pt,
                       const std::vector<ImagePoint>& cloud);

struct EfficiencyReport {
  bool efficient = true;
  std::optional<SpherePointd> witness;
  Resolution resolution;
  std::size_t feasible_count = 0;
};

/// Efficiency by enumeration: no feasible sample x with f(x) <_{C~_{f(y)}} f(y).
EfficiencyReport brute_force_efficient(const GopInstance& inst, const SpherePointd& y,
                                       const Resolution& resolution);

struct DisjointnessReport {
  bool disjoint = true;
  std::optional<ImagePoint> witness;
};

/// H(y) and the sampled image K(y) do not meet.
DisjointnessReport check_disjoint_H_K(const GopInstance& inst, const SpherePointd& y,
                                      const Resolution& resolution);
DisjointnessReport check_disjoint_H_K(const GopInstance& inst, const SpherePointd& y,
                                      const std::vector<ImagePoint>& cloud);

/// H(y) and the sampled extended image do not meet, probed with H points
/// derived from the cloud (see README for the probe construction).
DisjointnessReport check_disjoint_H_extended(const GopInstance& inst, const SpherePointd& y,
                                             const std::vector<ImagePoint>& cloud);

/// Throws InfeasibleError unless y satisfies the constraints.
void require_feasible(const GopInstance& inst, const SpherePointd& y);

}  // namespace sgop
