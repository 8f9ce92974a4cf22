#include "uavbf/uncertainty.hpp"

#include <algorithm>
#include <limits>

namespace uavbf {

void AodUncertainty::validate() const {
  if (!std::isfinite(theta_bar)) throw std::invalid_argument("AoD estimate must be finite");
  if (!(alpha >= 0.0 && alpha <= 0.5)) throw std::invalid_argument("AoD bound alpha must lie in [0, 0.5] rad");
}

void LocationUncertainty::validate() const {
  if (!center.allFinite()) throw std::invalid_argument("location estimate must be finite");
  if (!(radius >= 0.0) || !std::isfinite(radius)) throw std::invalid_argument("location radius must be >= 0");
}

void Scenario::validate() const {
  if (aod.empty()) throw std::invalid_argument("scenario has no users");
  if (location.size() != aod.size() || truth.size() != aod.size())
    throw std::invalid_argument("scenario per-user arrays differ in length");
  if (!uav_initial.allFinite()) throw std::invalid_argument("UAV position must be finite");
  for (const auto& a : aod) a.validate();
  for (const auto& l : location) l.validate();
}

TrueRealization sample_realization(std::uint64_t seed, const AodUncertainty& aod, const LocationUncertainty& loc) {
  std::mt19937_64 rng(seed);
  return sample_realization(rng, aod, loc);
}

double worst_case_distance_sq(const Position2D& uav, const LocationUncertainty& loc, double altitude) {
  const double far = (uav - loc.center).norm() + loc.radius;
  return far * far + altitude * altitude;
}

Position2D worst_case_location(const Position2D& uav, const LocationUncertainty& loc) {
  Position2D away = loc.center - uav;
  const double n = away.norm();
  // UAV directly above the estimate: every boundary point is a maximizer.
  if (n == 0.0) away = Position2D::UnitX();
  else away /= n;
  return loc.center + loc.radius * away;
}

namespace {

std::vector<double> theta_grid(double alpha, int points) {
  if (alpha == 0.0 || points <= 1) return {0.0};
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) g[i] = -alpha + 2.0 * alpha * i / (points - 1);
  return g;
}

} // namespace

std::vector<double> worst_case_sinr_oracle(std::span<const CMatrix<double>> covariances, const Position2D& uav,
                                           const Scenario& scenario, const SystemParams& params, AarModel model,
                                           const OracleGrid& grid) {
  const int n_users = scenario.n_users();
  if (static_cast<int>(covariances.size()) != n_users)
    throw std::invalid_argument("oracle: one covariance per user required");
  const double rho = params.rho_const();
  const double z0 = params.altitude;

  std::vector<double> worst(static_cast<std::size_t>(n_users), std::numeric_limits<double>::infinity());
  for (int k = 0; k < n_users; ++k) {
    const auto& aod = scenario.aod[k];
    const auto& loc = scenario.location[k];
    const auto taylor = taylor_terms(aod.theta_bar, params);

    // Location only scales the noise term: sigma^2 d^2 / rho.
    std::vector<double> dist_sq;
    dist_sq.push_back((uav - loc.center).squaredNorm() + z0 * z0);
    if (loc.radius > 0.0) {
      for (int j = 0; j < grid.location_directions; ++j) {
        const double phi = 2.0 * std::numbers::pi * j / grid.location_directions;
        const Position2D p = loc.center + loc.radius * Position2D(std::cos(phi), std::sin(phi));
        dist_sq.push_back((uav - p).squaredNorm() + z0 * z0);
      }
    }

    for (double dtheta : theta_grid(aod.alpha, grid.theta_points)) {
      const CVector<double> a = model == AarModel::linearized ? taylor.linearized(dtheta)
                                                              : nonlinear_aar(aod.theta_bar, dtheta, params);
      double signal = 0.0;
      double interference = 0.0;
      for (int r = 0; r < n_users; ++r) {
        const double g = std::real(a.dot(covariances[r] * a));
        if (r == k)
          signal = g;
        else
          interference += g;
      }
      for (double d2 : dist_sq) {
        const double s = signal / (interference + params.noise_power[k] * d2 / rho);
        worst[k] = std::min(worst[k], s);
      }
    }
  }
  return worst;
}

std::vector<double> realized_sinr(std::span<const CMatrix<double>> covariances, const Position2D& uav,
                                  const Scenario& scenario, const SystemParams& params) {
  const int n_users = scenario.n_users();
  std::vector<double> out(static_cast<std::size_t>(n_users));
  const Position3D r0(uav.x(), uav.y(), params.altitude);
  for (int k = 0; k < n_users; ++k) {
    const Position2D p = scenario.true_location(k);
    const auto h = channel_vector(r0, Position3D(p.x(), p.y(), 0.0), scenario.true_aod(k), params);
    out[k] = sinr_covariance<double>(k, covariances, h, params.noise_power[k]);
  }
  return out;
}

} // namespace uavbf
