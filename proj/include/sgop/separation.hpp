#pragma once

// Weak separation functions on the image space T_{f(y)}M x R^l, separator
// construction, certificate search over parameter grids, generalized
// Lagrangians, saddle points and the image duality gap.

#include <Eigen/Dense>

#include <optional>
#include <variant>
#include <vector>

#include "sgop/gop.hpp"

namespace sgop {

/// (theta, lambda) with theta in C*_{f(y)} \ {0} and lambda >= 0.
struct LinearSepParams {
  TangentVectord theta;
  Eigen::VectorXd lambda;
};

/// (phi, gamma) with phi in C*_{f(y)} and gamma < 0 componentwise or gamma = 0_l.
struct NonlinearSepParams {
  TangentVectord phi;
  Eigen::VectorXd gamma;

  bool gamma_is_zero() const { return (gamma.array() == 0.0).all(); }
};

enum class SeparationFamily { kLinear, kNonlinear };

struct SeparationCertificate {
  SeparationFamily family;
  std::variant<LinearSepParams, NonlinearSepParams> params;
  /// max over the cloud of omega at `params`; <= tolerances.certificate.
  double max_omega = 0.0;
  Resolution resolution;
};

/// Throw PreconditionError when the parameters leave their admissible sets.
void validate_params(const LinearSepParams& params, const SectorConed& cone_at_fy, double tol);
void validate_params(const NonlinearSepParams& params, const SectorConed& cone_at_fy, double tol);

/// omega1(u, v; theta, lambda) = <theta, u> + <lambda, v>
double omega1(const ImagePoint& pt, const LinearSepParams& params);

/// -Delta_{R+}(<phi, u>)
double omega_tilde(const TangentVectord& u, const TangentVectord& phi);

/// -xi_{R+^l, gamma}(v) for gamma < 0, and 0 for gamma = 0_l.
double omega_under(const Eigen::VectorXd& v, const Eigen::VectorXd& gamma);

double omega2(const ImagePoint& pt, const NonlinearSepParams& params);

/// Parameters with omega1(pt) <= 0 for a point outside H (constructive proof of
/// regularity). Throws PreconditionError if pt lies in H.
LinearSepParams find_separator_omega1(const ImagePoint& pt, const SectorConed& cone,
                                      double tol = kMembershipTolerance);
NonlinearSepParams find_separator_omega2(const ImagePoint& pt, const SectorConed& cone,
                                         double tol = kMembershipTolerance);

/// n unit directions at the midpoints of n equal angular cells of the polar
/// sector; every direction is interior to C*.
std::vector<TangentVectord> polar_directions(const SectorConed& cone, int n);

/// scale * (levels)^l for every scale, duplicates removed, first occurrence kept.
std::vector<Eigen::VectorXd> lambda_grid(const SearchGrid& grid, Eigen::Index l);

/// 0_l followed by (gamma_levels)^l.
std::vector<Eigen::VectorXd> gamma_grid(const SearchGrid& grid, Eigen::Index l);

/// First grid point (direction-major) whose max of omega over the cloud is
/// <= tolerances.certificate; such a point certifies efficiency of y.
std::optional<SeparationCertificate> certificate_search(const GopInstance& inst,
                                                        const SpherePointd& y,
                                                        SeparationFamily family,
                                                        const std::vector<ImagePoint>& cloud,
                                                        const SearchGrid& grid,
                                                        const Resolution& resolution,
                                                        unsigned threads = 1);

/// L^1_y(x; theta, lambda) = -omega1(M_y(x); theta, lambda)
double lagrangian1(const GopInstance& inst, const SpherePointd& y, const SpherePointd& x,
                   const LinearSepParams& params);

/// L^2_y(x; phi, gamma) = -omega2(M_y(x); phi, gamma)
double lagrangian2(const GopInstance& inst, const SpherePointd& y, const SpherePointd& x,
                   const NonlinearSepParams& params);

/// L1(y; th, lam) <= L1(y; th, lam_bar) <= L1(x; th, lam_bar) over the lambda
/// grid and the cloud sources, within tol.
bool is_saddle_point1(const GopInstance& inst, const SpherePointd& y,
                      const TangentVectord& theta_bar, const Eigen::VectorXd& lambda_bar,
                      const std::vector<ImagePoint>& cloud,
                      const std::vector<Eigen::VectorXd>& lambda_candidates, double tol);

bool is_saddle_point2(const GopInstance& inst, const SpherePointd& y,
                      const TangentVectord& phi_bar, const Eigen::VectorXd& gamma_bar,
                      const std::vector<ImagePoint>& cloud,
                      const std::vector<Eigen::VectorXd>& gamma_candidates, double tol);

/// max over the cloud of omega1 (the dual problem for fixed parameters).
double dual_value(const GopInstance& inst, const SpherePointd& y, const LinearSepParams& params,
                  const std::vector<ImagePoint>& cloud);

struct GapReport {
  double omega = 0.0;
  LinearSepParams argmin;
};

/// min over (theta, lambda) grids of dual_value; thetas must be unit vectors.
GapReport duality_gap(const GopInstance& inst, const SpherePointd& y,
                      const std::vector<TangentVectord>& thetas,
                      const std::vector<Eigen::VectorXd>& lambdas,
                      const std::vector<ImagePoint>& cloud, unsigned threads = 1);

}  // namespace sgop
