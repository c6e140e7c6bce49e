#include "sgop/separation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sgop/errors.hpp"
#include "sgop/parallel.hpp"
#include "sgop/scalar_functions.hpp"

namespace sgop {

namespace {

void require_cloud_at(const ImageFrame& frame, const std::vector<ImagePoint>& cloud) {
  if (cloud.empty()) throw PreconditionError("image cloud is empty");
  if (!same_point(cloud.front().u.base(), frame.fy)) {
    throw BaseMismatchError("image cloud was generated for a different y");
  }
}

/// All vectors levels^l, last component varying fastest.
std::vector<Eigen::VectorXd> product_grid(const std::vector<double>& levels, Eigen::Index l) {
  std::vector<Eigen::VectorXd> out;
  std::vector<std::size_t> idx(static_cast<std::size_t>(l), 0);
  while (true) {
    Eigen::VectorXd v(l);
    for (Eigen::Index i = 0; i < l; ++i) v[i] = levels[idx[static_cast<std::size_t>(i)]];
    out.push_back(std::move(v));
    Eigen::Index pos = l - 1;
    while (pos >= 0) {
      auto& k = idx[static_cast<std::size_t>(pos)];
      if (++k < levels.size()) break;
      k = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return out;
}

/// Row j holds <dir, u_j>; one row per cloud element.
Eigen::VectorXd directional_dots(const TangentVectord& dir, const std::vector<ImagePoint>& cloud) {
  Eigen::VectorXd dots(static_cast<Eigen::Index>(cloud.size()));
  for (std::size_t j = 0; j < cloud.size(); ++j) dots[static_cast<Eigen::Index>(j)] = dir.vec().dot(cloud[j].u.vec());
  return dots;
}

Eigen::MatrixXd constraint_matrix(const std::vector<ImagePoint>& cloud) {
  const Eigen::Index l = cloud.front().v.size();
  Eigen::MatrixXd vs(l, static_cast<Eigen::Index>(cloud.size()));
  for (std::size_t j = 0; j < cloud.size(); ++j) {
    if (cloud[j].v.size() != l) throw DimensionMismatchError("cloud constraint images differ in length");
    vs.col(static_cast<Eigen::Index>(j)) = cloud[j].v;
  }
  return vs;
}

}  // namespace

void validate_params(const LinearSepParams& params, const SectorConed& cone_at_fy, double tol) {
  if (!(params.theta.norm() > tol)) throw PreconditionError("theta must be nonzero");
  if (!cone_contains(polar_cone(cone_at_fy), params.theta, tol)) {
    throw PreconditionError("theta must lie in the polar cone");
  }
  if (!(params.lambda.array() >= 0.0).all()) throw PreconditionError("lambda must be >= 0");
}

void validate_params(const NonlinearSepParams& params, const SectorConed& cone_at_fy, double tol) {
  if (params.phi.norm() > 0.0 && !cone_contains(polar_cone(cone_at_fy), params.phi, tol)) {
    throw PreconditionError("phi must lie in the polar cone");
  }
  if (!params.gamma_is_zero() && !(params.gamma.array() < 0.0).all()) {
    throw PreconditionError("gamma must be strictly negative or the zero vector");
  }
}

double omega1(const ImagePoint& pt, const LinearSepParams& params) {
  if (pt.v.size() != params.lambda.size()) {
    throw DimensionMismatchError("omega1: lambda and v differ in length");
  }
  return params.theta.dot(pt.u) + params.lambda.dot(pt.v);
}

double omega_tilde(const TangentVectord& u, const TangentVectord& phi) {
  return -oriented_distance_halfline(phi.dot(u));
}

double omega_under(const Eigen::VectorXd& v, const Eigen::VectorXd& gamma) {
  if (v.size() != gamma.size()) throw DimensionMismatchError("omega2: gamma and v differ in length");
  if ((gamma.array() == 0.0).all()) return 0.0;
  return -gerstewitz(v, OrthantParamsd(gamma));
}

double omega2(const ImagePoint& pt, const NonlinearSepParams& params) {
  return omega_tilde(pt.u, params.phi) + omega_under(pt.v, params.gamma);
}

LinearSepParams find_separator_omega1(const ImagePoint& pt, const SectorConed& cone, double tol) {
  const Eigen::Index l = pt.v.size();
  const SectorConed polar = polar_cone(cone);
  const bool u_in_cone = cone_contains_strict(cone, pt.u, tol);
  const bool v_nonneg = (pt.v.array() >= -tol).all();
  if (u_in_cone && v_nonneg) throw PreconditionError("find_separator_omega1: point lies in H");

  if (!u_in_cone) {
    // The polar generator normal to the violated side gives <theta, u> <= 0.
    TangentVectord theta = polar.bisector();
    if (pt.u.norm() > 0.0) {
      theta = polar.gen_a().dot(pt.u) <= polar.gen_b().dot(pt.u) ? polar.gen_a() : polar.gen_b();
    }
    if (theta.dot(pt.u) <= 0.0 || v_nonneg) return {theta, Eigen::VectorXd::Zero(l)};
  }

  Eigen::Index i0 = 0;
  const double v_min = pt.v.minCoeff(&i0);
  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(l);
  lambda[i0] = 1.0;
  const TangentVectord direction = polar.bisector();
  const double s = direction.dot(pt.u);
  if (s <= 0.0) return {direction, lambda};
  // any 0 < alpha < -lambda_i0 v_i0 / <theta, u> works; take half the bound
  const double alpha = 0.5 * (-v_min) / s;
  return {alpha * direction, lambda};
}

NonlinearSepParams find_separator_omega2(const ImagePoint& pt, const SectorConed& cone, double tol) {
  const Eigen::Index l = pt.v.size();
  const SectorConed polar = polar_cone(cone);
  const bool u_in_cone = cone_contains_strict(cone, pt.u, tol);
  const bool v_nonneg = (pt.v.array() >= -tol).all();
  if (u_in_cone && v_nonneg) throw PreconditionError("find_separator_omega2: point lies in H");

  if (!u_in_cone) {
    TangentVectord phi = polar.bisector();
    if (pt.u.norm() > 0.0) {
      phi = polar.gen_a().dot(pt.u) <= polar.gen_b().dot(pt.u) ? polar.gen_a() : polar.gen_b();
    }
    if (phi.dot(pt.u) <= 0.0 || v_nonneg) return {phi, Eigen::VectorXd::Zero(l)};
  }
  return {TangentVectord::Zero(cone.base()), Eigen::VectorXd::Constant(l, -1.0)};
}

std::vector<TangentVectord> polar_directions(const SectorConed& cone, int n) {
  if (n < 1) throw PreconditionError("polar_directions: n must be >= 1");
  const SectorConed polar = polar_cone(cone);
  std::vector<TangentVectord> dirs;
  dirs.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) dirs.push_back(sector_direction(polar, (k + 0.5) / n));
  return dirs;
}

std::vector<Eigen::VectorXd> lambda_grid(const SearchGrid& grid, Eigen::Index l) {
  std::vector<Eigen::VectorXd> out;
  const auto base = product_grid(grid.lambda_levels, l);
  for (double scale : grid.lambda_scales) {
    for (const auto& levels : base) {
      Eigen::VectorXd lambda = scale * levels;
      const bool seen = std::any_of(out.begin(), out.end(),
                                    [&](const Eigen::VectorXd& o) { return o == lambda; });
      if (!seen) out.push_back(std::move(lambda));
    }
  }
  return out;
}

std::vector<Eigen::VectorXd> gamma_grid(const SearchGrid& grid, Eigen::Index l) {
  std::vector<Eigen::VectorXd> out{Eigen::VectorXd::Zero(l)};
  for (auto& g : product_grid(grid.gamma_levels, l)) out.push_back(std::move(g));
  return out;
}

std::optional<SeparationCertificate> certificate_search(const GopInstance& inst,
                                                        const SpherePointd& y,
                                                        SeparationFamily family,
                                                        const std::vector<ImagePoint>& cloud,
                                                        const SearchGrid& grid,
                                                        const Resolution& resolution,
                                                        unsigned threads) {
  require_feasible(inst, y);
  const ImageFrame frame = image_frame(inst, y);
  require_cloud_at(frame, cloud);
  const double tol = inst.tolerances.certificate;
  const Eigen::Index l = inst.num_constraints();
  const Eigen::MatrixXd vs = constraint_matrix(cloud);
  const auto directions = polar_directions(frame.cone, grid.n_angle);

  // Per-cloud-element contribution of the v-part for every second parameter.
  std::vector<Eigen::RowVectorXd> v_terms;
  std::vector<Eigen::VectorXd> seconds =
      family == SeparationFamily::kLinear ? lambda_grid(grid, l) : gamma_grid(grid, l);
  v_terms.reserve(seconds.size());
  for (const auto& s : seconds) {
    if (family == SeparationFamily::kLinear) {
      v_terms.push_back(s.transpose() * vs);
    } else {
      Eigen::RowVectorXd under(vs.cols());
      for (Eigen::Index j = 0; j < vs.cols(); ++j) under[j] = omega_under(vs.col(j), s);
      v_terms.push_back(std::move(under));
    }
  }

  struct Hit {
    std::size_t second = 0;
    double max_omega = 0.0;
  };
  const auto hits = parallel_map(directions.size(), threads, [&](std::size_t i) -> std::optional<Hit> {
    const Eigen::RowVectorXd dots = directional_dots(directions[i], cloud).transpose();
    for (std::size_t k = 0; k < v_terms.size(); ++k) {
      const double m = (dots + v_terms[k]).maxCoeff();
      if (m <= tol) return Hit{k, m};
    }
    return std::nullopt;
  });

  for (std::size_t i = 0; i < hits.size(); ++i) {
    if (!hits[i]) continue;
    SeparationCertificate cert{family, LinearSepParams{directions[i], seconds[hits[i]->second]},
                               hits[i]->max_omega, resolution};
    if (family == SeparationFamily::kNonlinear) {
      cert.params = NonlinearSepParams{directions[i], seconds[hits[i]->second]};
    }
    return cert;
  }
  return std::nullopt;
}

double lagrangian1(const GopInstance& inst, const SpherePointd& y, const SpherePointd& x,
                   const LinearSepParams& params) {
  return -omega1(image_map(inst, y, x), params);
}

double lagrangian2(const GopInstance& inst, const SpherePointd& y, const SpherePointd& x,
                   const NonlinearSepParams& params) {
  return -omega2(image_map(inst, y, x), params);
}

bool is_saddle_point1(const GopInstance& inst, const SpherePointd& y,
                      const TangentVectord& theta_bar, const Eigen::VectorXd& lambda_bar,
                      const std::vector<ImagePoint>& cloud,
                      const std::vector<Eigen::VectorXd>& lambda_candidates, double tol) {
  require_feasible(inst, y);
  const ImageFrame frame = image_frame(inst, y);
  require_cloud_at(frame, cloud);
  const LinearSepParams bar{theta_bar, lambda_bar};
  validate_params(bar, frame.cone, inst.tolerances.membership);

  const Eigen::VectorXd gy = evaluate_constraints(inst, y);
  const double at_bar = -lambda_bar.dot(gy);  // L1(y; theta_bar, lambda_bar), since log f(y) = 0
  for (const auto& lambda : lambda_candidates) {
    if (-lambda.dot(gy) > at_bar + tol) return false;
  }
  for (const auto& pt : cloud) {
    if (at_bar > -omega1(pt, bar) + tol) return false;
  }
  return true;
}

bool is_saddle_point2(const GopInstance& inst, const SpherePointd& y,
                      const TangentVectord& phi_bar, const Eigen::VectorXd& gamma_bar,
                      const std::vector<ImagePoint>& cloud,
                      const std::vector<Eigen::VectorXd>& gamma_candidates, double tol) {
  require_feasible(inst, y);
  const ImageFrame frame = image_frame(inst, y);
  require_cloud_at(frame, cloud);
  const NonlinearSepParams bar{phi_bar, gamma_bar};
  validate_params(bar, frame.cone, inst.tolerances.membership);

  const Eigen::VectorXd gy = evaluate_constraints(inst, y);
  const double tilde_at_y = omega_tilde(TangentVectord::Zero(frame.fy), phi_bar);
  const double at_bar = -tilde_at_y - omega_under(gy, gamma_bar);
  for (const auto& gamma : gamma_candidates) {
    if (-tilde_at_y - omega_under(gy, gamma) > at_bar + tol) return false;
  }
  for (const auto& pt : cloud) {
    if (at_bar > -omega2(pt, bar) + tol) return false;
  }
  return true;
}

double dual_value(const GopInstance& inst, const SpherePointd& y, const LinearSepParams& params,
                  const std::vector<ImagePoint>& cloud) {
  require_feasible(inst, y);
  const ImageFrame frame = image_frame(inst, y);
  require_cloud_at(frame, cloud);
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& pt : cloud) best = std::max(best, omega1(pt, params));
  return best;
}

GapReport duality_gap(const GopInstance& inst, const SpherePointd& y,
                      const std::vector<TangentVectord>& thetas,
                      const std::vector<Eigen::VectorXd>& lambdas,
                      const std::vector<ImagePoint>& cloud, unsigned threads) {
  if (thetas.empty() || lambdas.empty()) throw PreconditionError("duality_gap: empty parameter grid");
  require_feasible(inst, y);
  const ImageFrame frame = image_frame(inst, y);
  require_cloud_at(frame, cloud);
  for (const auto& theta : thetas) {
    if (std::abs(theta.norm() - 1.0) > 1e-9) throw PreconditionError("duality_gap: theta must be unit");
    validate_params(LinearSepParams{theta, lambdas.front()}, frame.cone, inst.tolerances.membership);
  }
  const Eigen::MatrixXd vs = constraint_matrix(cloud);
  std::vector<Eigen::RowVectorXd> v_terms;
  v_terms.reserve(lambdas.size());
  for (const auto& lambda : lambdas) {
    if (lambda.size() != vs.rows()) throw DimensionMismatchError("duality_gap: lambda has the wrong length");
    v_terms.push_back(lambda.transpose() * vs);
  }

  struct Best {
    std::size_t lambda = 0;
    double value = std::numeric_limits<double>::infinity();
  };
  const auto per_theta = parallel_map(thetas.size(), threads, [&](std::size_t i) {
    const Eigen::RowVectorXd dots = directional_dots(thetas[i], cloud).transpose();
    Best best;
    for (std::size_t k = 0; k < v_terms.size(); ++k) {
      const double m = (dots + v_terms[k]).maxCoeff();
      if (m < best.value) best = {k, m};
    }
    return best;
  });

  std::size_t arg = 0;
  for (std::size_t i = 1; i < per_theta.size(); ++i) {
    if (per_theta[i].value < per_theta[arg].value) arg = i;
  }
  return {per_theta[arg].value, LinearSepParams{thetas[arg], lambdas[per_theta[arg].lambda]}};
}

}  // namespace sgop
