#include "uavbf/robust_lmi.hpp"

#include <algorithm>
#include <string>

namespace uavbf {

namespace {

Eigen::MatrixXd unit(int dim, int i, int j) {
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(dim, dim);
  e(i, j) = 1.0;
  e(j, i) = 1.0;
  return e;
}

} // namespace

double ImpliedQuadratic::value(std::span<const double> x, const Eigen::VectorXd& u) const {
  const Eigen::MatrixXd q = payload.evaluate(x);
  Eigen::VectorXd v(u.size() + 1);
  v.head(u.size()) = u;
  v(u.size()) = 1.0;
  return v.dot(q * v);
}

RealLmiBlock C2aConstraint::real_block() const {
  if (const auto* r = std::get_if<RealLmiBlock>(&block)) return *r;
  return realify(std::get<HermitianLmiBlock>(block));
}

C2aConstraint build_c2a_lmi(int k, std::span<const HermitianAffine> covariances, int eta_var,
                            std::optional<int> delta_var, const TaylorTerms<double>& taylor, double alpha,
                            double sinr_req, double eta_coeff, C2aForm form) {
  const int n = static_cast<int>(taylor.a0.size());
  if (taylor.a1.size() != n) throw std::invalid_argument("c2a: Taylor terms differ in length");
  if (k < 0 || k >= static_cast<int>(covariances.size())) throw std::invalid_argument("c2a: user index out of range");
  for (const auto& w : covariances)
    if (w.dimension != n) throw std::invalid_argument("c2a: covariance dimension does not match antenna count");
  if (!(sinr_req > 0.0)) throw std::invalid_argument("c2a: SINR target must be positive");
  if (alpha < 0.0) throw std::invalid_argument("c2a: alpha must be nonnegative");
  const bool degenerate = alpha == 0.0;
  if (degenerate == delta_var.has_value())
    throw std::invalid_argument("c2a: S-procedure multiplier must be present iff alpha > 0");

  const std::string name = "c2a[" + std::to_string(k) + "]";
  const Eigen::MatrixXcd u = taylor.basis();

  // Q(x) in the (a1, a0) basis; the payload is always the real 2x2 form.
  ImpliedQuadratic quad;
  quad.payload = RealLmiBlock(name + ".quadratic", 2);
  quad.dim = 1;
  quad.radius = alpha;

  HermitianLmiBlock herm(name, 2);
  for (int r = 0; r < static_cast<int>(covariances.size()); ++r) {
    const double sign = r == k ? 1.0 : -sinr_req;
    for (const auto& [v, b] : covariances[r].terms) {
      const Eigen::MatrixXcd c = sign * (u.adjoint() * b * u);
      herm.add(v, c);
      quad.payload.add(v, c.real());
    }
  }
  Eigen::MatrixXd corner = Eigen::MatrixXd::Zero(2, 2);
  corner(1, 1) = -eta_coeff;
  herm.add(eta_var, corner.cast<std::complex<double>>());
  quad.payload.add(eta_var, corner);

  if (degenerate) {
    // Direct constraint at dtheta = 0: a0^H M a0 - eta_coeff * eta >= 0.
    RealLmiBlock scalar(name, 1);
    for (const auto& t : quad.payload.terms) scalar.add(t.var, t.coeff.bottomRightCorner(1, 1));
    return {std::move(scalar), std::move(quad)};
  }

  Eigen::MatrixXd mult = Eigen::MatrixXd::Zero(2, 2);
  mult(0, 0) = 1.0;
  mult(1, 1) = -alpha * alpha;
  if (form == C2aForm::hermitian) {
    herm.add(*delta_var, mult.cast<std::complex<double>>());
    return {std::move(herm), std::move(quad)};
  }
  RealLmiBlock real = quad.payload;
  real.name = name;
  real.add(*delta_var, mult);
  return {std::move(real), std::move(quad)};
}

C2bConstraint build_c2b_lmi(int k, const C2bVariables& vars, const LocationUncertainty& loc, double altitude,
                            double eta_coeff) {
  if (loc.radius < 0.0) throw std::invalid_argument("c2b: radius must be nonnegative");
  const bool degenerate = loc.radius == 0.0;
  if (degenerate == vars.mu.has_value())
    throw std::invalid_argument("c2b: S-procedure multiplier must be present iff radius > 0");

  const std::string name = "c2b[" + std::to_string(k) + "]";
  const double z2 = altitude * altitude;

  // [[-I, r0 - c], [(r0 - c)^T, -t - z0^2 + eta_coeff * eta]]
  ImpliedQuadratic quad;
  quad.payload = RealLmiBlock(name + ".quadratic", 3);
  quad.dim = 2;
  quad.radius = loc.radius;
  auto& q = quad.payload;
  q.constant.topLeftCorner(2, 2) = -Eigen::Matrix2d::Identity();
  q.constant.block(0, 2, 2, 1) = -loc.center;
  q.constant.block(2, 0, 1, 2) = -loc.center.transpose();
  q.constant(2, 2) = -z2;
  q.add(vars.pos_x, unit(3, 0, 2));
  q.add(vars.pos_y, unit(3, 1, 2));
  q.add(vars.t, -unit(3, 2, 2));
  q.add(vars.eta, eta_coeff * unit(3, 2, 2));

  C2bConstraint out;
  out.quadratic = quad;

  if (degenerate) {
    out.main = RealLmiBlock(name, 1);
    out.main.constant(0, 0) = -z2;
    out.main.add(vars.t, -Eigen::MatrixXd::Ones(1, 1));
    out.main.add(vars.eta, eta_coeff * Eigen::MatrixXd::Ones(1, 1));
  } else {
    out.main = q;
    out.main.name = name;
    Eigen::MatrixXd mult = Eigen::MatrixXd::Identity(3, 3);
    mult(2, 2) = -loc.radius * loc.radius;
    out.main.add(*vars.mu, mult);
  }

  // [[I, r0 - c], [(r0 - c)^T, t]]
  out.epigraph = RealLmiBlock(name + ".epigraph", 3);
  auto& e = out.epigraph;
  e.constant.topLeftCorner(2, 2) = Eigen::Matrix2d::Identity();
  e.constant.block(0, 2, 2, 1) = -loc.center;
  e.constant.block(2, 0, 1, 2) = -loc.center.transpose();
  e.add(vars.pos_x, unit(3, 0, 2));
  e.add(vars.pos_y, unit(3, 1, 2));
  e.add(vars.t, unit(3, 2, 2));
  return out;
}

SProcedureReport verify_s_procedure(const RealLmiBlock& block, const ImpliedQuadratic& quadratic,
                                    std::span<const double> x, int samples, double eig_tol, double value_tol) {
  SProcedureReport report;
  const Eigen::MatrixXd m = block.evaluate(x);
  report.min_eigenvalue = min_eigenvalue(m);
  report.lmi_feasible = report.min_eigenvalue >= -eig_tol * std::max(1.0, m.cwiseAbs().maxCoeff());

  const Eigen::MatrixXd q = quadratic.payload.evaluate(x);
  const double scale = std::max(1.0, q.cwiseAbs().maxCoeff());
  auto check = [&](const Eigen::VectorXd& u) {
    Eigen::VectorXd v(u.size() + 1);
    v.head(u.size()) = u;
    v(u.size()) = 1.0;
    const double val = v.dot(q * v);
    ++report.samples_checked;
    if (val < -value_tol * scale * std::max(1.0, v.squaredNorm())) report.violations.push_back({u, val});
  };

  const double r = quadratic.radius;
  samples = std::max(samples, 2);
  if (quadratic.dim == 1) {
    if (r == 0.0) {
      check(Eigen::VectorXd::Zero(1));
    } else {
      for (int i = 0; i < samples; ++i) check(Eigen::VectorXd::Constant(1, -r + 2.0 * r * i / (samples - 1)));
    }
  } else {
    check(Eigen::VectorXd::Zero(quadratic.dim));
    if (r > 0.0) {
      for (double frac : {0.25, 0.5, 0.75, 1.0})
        for (int i = 0; i < samples; ++i) {
          const double phi = 2.0 * std::numbers::pi * i / samples;
          check(Eigen::Vector2d(frac * r * std::cos(phi), frac * r * std::sin(phi)));
        }
    }
  }
  return report;
}

} // namespace uavbf
