#pragma once

#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "uavbf/geometry.hpp"
#include "uavbf/lmi.hpp"
#include "uavbf/uncertainty.hpp"

namespace uavbf {

/// Real: 2x2 block with off-diagonal Re{a1^H M a0}, exact for real dtheta.
/// Hermitian: the complex off-diagonal a1^H M a0, a sufficient condition.
enum class C2aForm { real, hermitian };

/// The quadratic inequality a robust block stands for:
///   [u; 1]^T Q(x) [u; 1] >= 0   for all ||u|| <= radius,
/// with u the AoD perturbation (dim 1) or the location offset (dim 2).
struct ImpliedQuadratic {
  RealLmiBlock payload;
  int dim = 1;
  double radius = 0.0;

  double value(std::span<const double> x, const Eigen::VectorXd& u) const;
};

struct C2aConstraint {
  std::variant<RealLmiBlock, HermitianLmiBlock> block;
  ImpliedQuadratic quadratic;

  RealLmiBlock real_block() const;
};

struct C2bConstraint {
  RealLmiBlock main;
  RealLmiBlock epigraph; // t >= ||r0 - center||^2 in Schur form
  ImpliedQuadratic quadratic;
};

/// Variable ids of the worst-case location constraint of one user.
struct C2bVariables {
  int pos_x = -1;
  int pos_y = -1;
  int eta = -1;
  std::optional<int> mu; // absent when the radius is zero
  int t = -1;
};

/// Worst-case AoD constraint of user k:
///   a(dtheta)^H (W_k - sinr_req sum_{r != k} W_r) a(dtheta) >= eta_coeff * eta
/// for all |dtheta| <= alpha under the linearized response.
///
/// With alpha == 0 the S-procedure has no Slater point, so a 1x1 block at
/// dtheta = 0 is emitted and `delta_var` must be empty.
C2aConstraint build_c2a_lmi(int k, std::span<const HermitianAffine> covariances, int eta_var,
                            std::optional<int> delta_var, const TaylorTerms<double>& taylor, double alpha,
                            double sinr_req, double eta_coeff = 1.0, C2aForm form = C2aForm::real);

/// Worst-case location constraint of user k:
///   eta_coeff * eta >= ||r0 - (center + dr)||^2 + altitude^2   for all ||dr|| <= radius,
/// with the quadratic ||r0 - center||^2 lifted to the epigraph variable t.
/// All lengths are in one consistent unit.
C2bConstraint build_c2b_lmi(int k, const C2bVariables& vars, const LocationUncertainty& loc, double altitude,
                            double eta_coeff = 1.0);

struct SProcedureReport {
  struct Violation {
    Eigen::VectorXd u;
    double value;
  };

  double min_eigenvalue = 0.0;
  bool lmi_feasible = false;
  std::vector<Violation> violations;
  int samples_checked = 0;

  bool clean() const { return lmi_feasible && violations.empty(); }
};

/// Checks the block's minimum eigenvalue at `x` and samples the implied
/// quadratic densely over the uncertainty ball.
SProcedureReport verify_s_procedure(const RealLmiBlock& block, const ImpliedQuadratic& quadratic,
                                    std::span<const double> x, int samples = 201, double eig_tol = 1e-9,
                                    double value_tol = 1e-9);

} // namespace uavbf
