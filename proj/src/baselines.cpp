#include "uavbf/baselines.hpp"

#include <cmath>

namespace uavbf {

const char* to_string(FixedScheme s) {
  switch (s) {
    case FixedScheme::zf: return "zf";
    case FixedScheme::mrt: return "mrt";
  }
  return "unknown";
}

std::vector<Eigen::VectorXcd> estimated_responses(const Scenario& scenario, const SystemParams& params) {
  std::vector<Eigen::VectorXcd> out;
  for (const auto& a : scenario.aod) out.push_back(steering_vector(a.theta_bar, params));
  return out;
}

std::vector<Eigen::VectorXcd> zf_directions(std::span<const Eigen::VectorXcd> estimates) {
  const int n_users = static_cast<int>(estimates.size());
  if (n_users == 0) return {};
  const Eigen::Index n = estimates[0].size();
  if (n < n_users) throw RankDeficientError("zero forcing needs at least as many antennas as users");

  std::vector<Eigen::VectorXcd> out;
  for (int k = 0; k < n_users; ++k) {
    const Eigen::VectorXcd& a = estimates[k];
    Eigen::VectorXcd v = a;
    if (n_users > 1) {
      Eigen::MatrixXcd others(n, n_users - 1);
      for (int r = 0, c = 0; r < n_users; ++r)
        if (r != k) others.col(c++) = estimates[r];
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(others, Eigen::ComputeThinU);
      const auto& s = svd.singularValues();
      if (s(s.size() - 1) <= 1e-9 * s(0))
        throw RankDeficientError("other users' estimated responses are linearly dependent");
      const Eigen::MatrixXcd& u = svd.matrixU();
      v -= u * (u.adjoint() * a);
    }
    const double norm = v.norm();
    if (norm <= 1e-9 * a.norm())
      throw RankDeficientError("user " + std::to_string(k) + " shares an estimated direction with another user");
    out.push_back(v / norm);
  }
  return out;
}

std::vector<Eigen::VectorXcd> mrt_directions(std::span<const Eigen::VectorXcd> estimates) {
  std::vector<Eigen::VectorXcd> out;
  for (const auto& a : estimates) out.push_back(a.normalized());
  return out;
}

AllocationSolution solve_fixed_direction(FixedScheme scheme, const Scenario& scenario, const SystemParams& params,
                                         const SolverOptions& options, bool include_c1) {
  const auto est = estimated_responses(scenario, params);
  const auto dirs = scheme == FixedScheme::zf ? zf_directions(est) : mrt_directions(est);
  AssemblyOptions ao;
  ao.include_c1 = include_c1;
  return solve(assemble_fixed_direction(scenario, params, dirs, ao), options);
}

std::optional<double> minimal_common_scale(std::span<const Eigen::MatrixXcd> covariances, const Position2D& uav,
                                           const Scenario& scenario, const SystemParams& params, double max_scale) {
  auto meets = [&](double tau) {
    std::vector<Eigen::MatrixXcd> scaled;
    for (const auto& w : covariances) scaled.push_back(tau * w);
    const auto s = realized_sinr(scaled, uav, scenario, params);
    for (std::size_t k = 0; k < s.size(); ++k)
      if (!(s[k] >= params.sinr_req[k] * (1.0 - kSinrSlack))) return false;
    return true;
  };
  if (meets(1.0)) return 1.0;
  if (!meets(max_scale)) return std::nullopt;
  // lo fails, hi meets; bisect on the log scale.
  double lo = 1.0;
  double hi = max_scale;
  while (hi / lo > 1.0 + 1e-7) {
    const double mid = std::sqrt(lo * hi);
    if (meets(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

NonRobustResult solve_nonrobust(const Scenario& scenario, const SystemParams& params, const SolverOptions& options,
                                bool include_c1) {
  Scenario nominal = scenario;
  for (auto& a : nominal.aod) a.alpha = 0.0;
  for (auto& l : nominal.location) l.radius = 0.0;
  AssemblyOptions ao;
  ao.include_c1 = include_c1;

  NonRobustResult res;
  res.design = solve(assemble(nominal, params, ao), options);
  if (!res.design.optimal()) return res;

  const auto tau = minimal_common_scale(res.design.covariances, res.design.position, scenario, params);
  res.outage = !tau;
  res.tau = tau.value_or(NonRobustResult::kMaxScale);
  res.total_power = res.tau * res.design.objective;
  for (const auto& w : res.design.covariances) res.covariances.push_back(res.tau * w);
  res.realized_sinr = realized_sinr(res.covariances, res.design.position, scenario, params);
  return res;
}

} // namespace uavbf
