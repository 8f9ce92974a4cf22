#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "uavbf/geometry.hpp"
#include "uavbf/robust_lmi.hpp"
#include "uavbf/sdp_solver.hpp"
#include "uavbf/system_params.hpp"
#include "uavbf/uncertainty.hpp"

namespace uavbf {

struct AssemblyOptions {
  bool include_c1 = true;
  C2aForm c2a_form = C2aForm::real;
  /// Watts per internal power unit; covariances are held in microwatts.
  double power_unit = 1e-6;
};

/// Where each decision variable lives in the flat vector handed to the solver.
struct VariableLayout {
  std::vector<HermitianAffine> covariance; // W_k in power units
  std::vector<std::optional<int>> power;   // p_k, fixed-direction model only
  int pos_x = -1;
  int pos_y = -1;
  std::vector<int> eta;
  std::vector<std::optional<int>> delta; // absent when alpha_k == 0
  std::vector<std::optional<int>> mu;    // absent when D_k == 0
  std::vector<int> t;
  std::vector<std::string> names;

  int size() const { return static_cast<int>(names.size()); }
};

enum class ConstraintKind { per_antenna_power, c2a, c2b, epigraph, psd, sign };

const char* to_string(ConstraintKind k);

struct ConstraintBlock {
  ConstraintKind kind;
  int index; // user, or antenna for per_antenna_power
  std::variant<RealLmiBlock, HermitianLmiBlock> block;
};

/// The relaxed robust power-minimization program in scaled units:
/// power in `power_unit` watts, lengths in units of the altitude, and the
/// C2a/C2b coupling slack eta measured in squared length units.
struct RobustProblem {
  SystemParams params;
  Scenario scenario;
  AssemblyOptions options;
  double length_unit = 1.0;

  VariableLayout layout;
  Eigen::VectorXd cost;
  std::vector<ConstraintBlock> constraints;

  std::vector<TaylorTerms<double>> taylor;
  std::vector<ImpliedQuadratic> c2a_quadratics;
  std::vector<ImpliedQuadratic> c2b_quadratics;
  std::vector<Eigen::VectorXcd> directions; // fixed-direction model only

  bool fixed_direction() const { return !directions.empty(); }
  int n_vars() const { return layout.size(); }
  /// Physical eta per internal unit for user k: sinr_k sigma_k^2 L^2 / rho.
  double eta_unit(int k) const;
  /// Coefficient of eta in the C2a corner, in power units.
  double eta_coeff(int k) const { return eta_unit(k) / options.power_unit; }
};

/// Full-covariance relaxation (one Hermitian W_k per user).
RobustProblem assemble(const Scenario& scenario, const SystemParams& params, const AssemblyOptions& options = {});

/// W_k = p_k d_k d_k^H with fixed unit directions; C3 reduces to p_k >= 0.
RobustProblem assemble_fixed_direction(const Scenario& scenario, const SystemParams& params,
                                       std::span<const Eigen::VectorXcd> directions,
                                       const AssemblyOptions& options = {});

/// Real symmetric program: every Hermitian block is embedded as [[X, -Y], [Y, X]].
LmiProgram realify(const RobustProblem& problem);

/// Structured-text (JSON) serialization of the realified program.
std::string serialize(const RobustProblem& problem);

struct SlackVariables {
  std::vector<double> eta;   // W
  std::vector<double> delta; // W / rad^2, zero when absent
  std::vector<double> mu;    // dimensionless, zero when absent
  std::vector<double> t;     // m^2
};

struct AllocationSolution {
  SolveStatus status = SolveStatus::numerical_failure;
  std::vector<Eigen::MatrixXcd> covariances; // W_k in watts
  std::vector<Eigen::VectorXcd> beamformers; // principal factors, sqrt(W)
  std::vector<double> rank_ratio;
  std::vector<double> powers; // p_k in watts, fixed-direction model only
  Position2D position = Position2D::Zero();
  SlackVariables slacks;
  double objective = 0.0; // W
  double duality_gap = 0.0;
  double max_violation = 0.0; // relative, over all blocks
  std::vector<std::string> warnings;
  ConicSolveReport report;

  bool optimal() const { return status == SolveStatus::optimal; }
  double max_rank_ratio() const;
};

AllocationSolution solve(const RobustProblem& problem, const SolverOptions& options = {});

struct RankOneFactor {
  Eigen::VectorXcd w;
  double rank_ratio = 0.0; // lambda_2 / lambda_1
};

inline constexpr double kRankTolerance = 1e-5;

/// Principal eigenpair sqrt(lambda_1) v_1, phase-normalized so that the first
/// nonzero entry is real and nonnegative.
RankOneFactor principal_factor(const Eigen::MatrixXcd& w);

/// Beamformers w_k from an optimal solution; adds a warning for every user
/// whose rank ratio exceeds kRankTolerance. Throws if not optimal.
std::vector<Eigen::VectorXcd> extract_beamformers(AllocationSolution& solution);

struct KktDiagnostics {
  struct User {
    double nu_max = 0.0;               // largest eigenvalue of Delta_k
    double stationarity = 0.0;         // ||Y_k - (I - Delta_k)||_F / ||I||_F
    double complementarity = 0.0;      // |tr(Y_k W_k)| / (||Y_k||_F ||W_k||_F)
    double min_eig_y = 0.0;
    double min_eig_t = 0.0;
  };

  bool available = false;
  std::string notice;
  double min_xi = 0.0;
  std::vector<User> users;

  bool passed(double tol = 1e-6, double nu_tol = 1e-4) const;
};

/// Dual-side checks of the optimality conditions behind the rank-one result.
KktDiagnostics kkt_diagnostics(const RobustProblem& problem, const AllocationSolution& solution);

/// Oracle on a solved allocation; throws std::logic_error unless optimal.
std::vector<double> worst_case_sinr_oracle(const AllocationSolution& solution, const Scenario& scenario,
                                           const SystemParams& params, AarModel model, const OracleGrid& grid = {});

} // namespace uavbf
