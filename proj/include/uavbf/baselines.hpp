#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "uavbf/robust_problem.hpp"

namespace uavbf {

class RankDeficientError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class FixedScheme { zf, mrt };

const char* to_string(FixedScheme s);

/// Estimated array responses a(theta_bar_k), one per user.
std::vector<Eigen::VectorXcd> estimated_responses(const Scenario& scenario, const SystemParams& params);

/// Unit vectors: a_k projected onto the orthogonal complement of the other
/// users' responses. Throws RankDeficientError when that projection (or the
/// other users' response matrix) degenerates to within 1e-9.
std::vector<Eigen::VectorXcd> zf_directions(std::span<const Eigen::VectorXcd> estimates);

/// Unit vectors along each user's own estimated response.
std::vector<Eigen::VectorXcd> mrt_directions(std::span<const Eigen::VectorXcd> estimates);

/// Powers and hover position for fixed beam directions under the robust
/// constraints. The per-antenna caps are left out unless `include_c1` is set.
AllocationSolution solve_fixed_direction(FixedScheme scheme, const Scenario& scenario, const SystemParams& params,
                                         const SolverOptions& options = {}, bool include_c1 = false);

struct NonRobustResult {
  AllocationSolution design; // nominal solve with alpha = 0 and D = 0
  double tau = 1.0;          // common power scale applied to every beam
  bool outage = false;       // no tau in [1, kMaxScale] meets the targets
  double total_power = 0.0;  // tau * design.objective, W
  std::vector<Eigen::MatrixXcd> covariances; // tau * W_k
  std::vector<double> realized_sinr;         // at tau, true AoD and location

  static constexpr double kMaxScale = 1e6;
};

/// Design that trusts the estimates, then scales all beams by the smallest
/// common tau >= 1 that meets every SINR target at the hidden realization.
NonRobustResult solve_nonrobust(const Scenario& scenario, const SystemParams& params,
                                const SolverOptions& options = {}, bool include_c1 = true);

/// Relative shortfall below a SINR target still counted as meeting it; covers
/// the solver's own tolerance on the nominal design.
inline constexpr double kSinrSlack = 1e-7;

/// Smallest common scale in [1, max_scale] whose covariances reach every
/// target (within kSinrSlack) at the hidden realization, to relative accuracy
/// 1e-7. Returns nullopt when max_scale is still short.
std::optional<double> minimal_common_scale(std::span<const Eigen::MatrixXcd> covariances, const Position2D& uav,
                                           const Scenario& scenario, const SystemParams& params,
                                           double max_scale = NonRobustResult::kMaxScale);

} // namespace uavbf
