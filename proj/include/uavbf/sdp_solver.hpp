#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "uavbf/lmi.hpp"

namespace uavbf {

/// Standard LMI-form conic program
///
///   minimize    cost^T x
///   subject to  F0_b + sum_i x_i F_ib  >= 0   for every block b,
///
/// with block-diagonal real symmetric data. Scalar inequalities are 1x1
/// blocks, so the nonnegative orthant is a special case of the PSD cone.
struct LmiProgram {
  int n_vars = 0;
  Eigen::VectorXd cost;
  std::vector<RealLmiBlock> blocks;
  std::vector<std::string> var_names;

  int total_dimension() const;
  Eigen::VectorXd evaluate_min_eigenvalues(const Eigen::VectorXd& x) const;
};

/// `automatic` iterates in double and repeats a failed solve in long double.
enum class SolverPrecision { automatic, standard, extended };

struct SolverOptions {
  double tolerance = 1e-8;
  int max_iterations = 120;
  /// Threshold on ||A(X)|| / (-F0 . X) for declaring the LMI infeasible.
  double infeasibility_tolerance = 1e-8;
  double step_fraction = 0.98;
  SolverPrecision precision = SolverPrecision::automatic;
  bool verbose = false;
};

enum class SolveStatus { optimal, infeasible, numerical_failure };

const char* to_string(SolveStatus s);

struct ConicSolveReport {
  SolveStatus status = SolveStatus::numerical_failure;
  int iterations = 0;
  double primal_objective = 0.0; // cost^T x
  double dual_objective = 0.0;   // -sum_b F0_b . X_b
  double primal_residual = 0.0;  // relative ||F(x) - Z||
  double dual_residual = 0.0;    // relative ||c - A^*(X)||
  double relative_gap = 0.0;
  Eigen::VectorXd x;
  std::vector<Eigen::MatrixXd> slacks; // Z_b = F_b(x)
  std::vector<Eigen::MatrixXd> duals;  // X_b, one multiplier per block
  std::string message;
};

/// Primal-dual path-following interior-point method (HKM direction with
/// Mehrotra predictor-corrector, infeasible start). Deterministic and
/// single-threaded.
ConicSolveReport solve_lmi(const LmiProgram& program, const SolverOptions& options = {});

} // namespace uavbf
