#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "uavbf/geometry.hpp"

namespace uavbf {

/// Omega_k: |dtheta| <= alpha around the estimate theta_bar.
struct AodUncertainty {
  double theta_bar = 0.0;
  double alpha = 0.0;

  void validate() const;
};

/// Psi_k: disk of radius D around the estimated ground position.
struct LocationUncertainty {
  Position2D center = Position2D::Zero();
  double radius = 0.0;

  void validate() const;
};

/// Hidden per-user realization used only for evaluation.
struct TrueRealization {
  double delta_theta = 0.0;
  Position2D delta_r = Position2D::Zero();
};

/// Controller-side view of the world plus the hidden truth.
struct Scenario {
  Position3D uav_initial = Position3D::Zero();
  std::vector<AodUncertainty> aod;
  std::vector<LocationUncertainty> location;
  std::vector<TrueRealization> truth;

  int n_users() const { return static_cast<int>(aod.size()); }
  Position2D true_location(int k) const { return location[k].center + truth[k].delta_r; }
  double true_aod(int k) const { return aod[k].theta_bar + truth[k].delta_theta; }
  void validate() const;
};

/// Uniform point in the disk of the given radius (polar method).
template <typename Rng>
Position2D sample_uniform_disk(Rng& rng, double radius) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double r = radius * std::sqrt(unit(rng));
  const double phi = 2.0 * std::numbers::pi * unit(rng);
  return {r * std::cos(phi), r * std::sin(phi)};
}

template <typename Rng>
TrueRealization sample_realization(Rng& rng, const AodUncertainty& aod, const LocationUncertainty& loc) {
  std::uniform_real_distribution<double> sym(-1.0, 1.0);
  TrueRealization t;
  t.delta_theta = aod.alpha * sym(rng);
  t.delta_r = sample_uniform_disk(rng, loc.radius);
  return t;
}

TrueRealization sample_realization(std::uint64_t seed, const AodUncertainty& aod,
                                   const LocationUncertainty& loc);

/// max over Psi_k of the squared UAV-user distance: (||r0 - center|| + D)^2 + z0^2.
double worst_case_distance_sq(const Position2D& uav, const LocationUncertainty& loc, double altitude);

/// The disk point attaining worst_case_distance_sq.
Position2D worst_case_location(const Position2D& uav, const LocationUncertainty& loc);

enum class AarModel { linearized, nonlinear };

struct OracleGrid {
  int theta_points = 101;
  int location_directions = 64;
};

/// Per-user minimum SINR over a grid of Omega_k x Psi_k for fixed transmit
/// covariances. Location enters only through path loss.
std::vector<double> worst_case_sinr_oracle(std::span<const CMatrix<double>> covariances, const Position2D& uav,
                                           const Scenario& scenario, const SystemParams& params, AarModel model,
                                           const OracleGrid& grid = {});

/// SINR of every user at the hidden true realization (exact AAR, true location).
std::vector<double> realized_sinr(std::span<const CMatrix<double>> covariances, const Position2D& uav,
                                  const Scenario& scenario, const SystemParams& params);

} // namespace uavbf
