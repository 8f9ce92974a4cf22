#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uavbf/system_params.hpp"

namespace uavbf {

struct CheckResult {
  std::string suite;
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  int instances = 20; // randomized cases per property
};

/// Invariant suites, one per module: geometry, uncertainty, robust-lmi,
/// conic, problem, baselines, experiments.
const std::vector<std::string>& suite_names();

/// Throws std::invalid_argument for an unknown suite name.
std::vector<CheckResult> run_suite(const std::string& suite, const VerifyOptions& options = {});
std::vector<CheckResult> run_invariant_suites(const VerifyOptions& options = {});

/// Minimum total power for one user straight below the UAV with exact CSI:
/// sinr * noise * altitude^2 / (rho_const * N).
double single_user_power(const SystemParams& params);

/// Worst relative error of the Hermitian real-embedding round trip over
/// random matrices of sizes 1..8.
double embedding_roundtrip_error(std::uint64_t seed, int trials = 50);

/// Finite-difference error ||(a(t+h) - a(t)) / h - a'(t)|| at each step size.
std::vector<double> taylor_fd_errors(double theta_bar, int n_antennas, double spacing_ratio,
                                     const std::vector<double>& steps);

struct SProcedureStats {
  int instances = 0;
  int lmi_infeasible = 0; // should stay 0: instances are built on the boundary
  int violations = 0;     // sampled points where the implied quadratic goes negative
};

/// Random C2a and C2b blocks placed on the boundary of LMI feasibility, then
/// densely sampled over the uncertainty ball.
SProcedureStats s_procedure_sampling(std::uint64_t seed, int instances);

} // namespace uavbf
