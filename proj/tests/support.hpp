#pragma once

#include <cmath>
#include <numbers>

#include "uavbf/system_params.hpp"
#include "uavbf/uncertainty.hpp"

namespace testing {

// Independently computed at 2.4 GHz: lambda = c / f, rho = (lambda / 4 pi)^2.
inline constexpr double kRho = 9.880961210318492e-05;
inline constexpr double kNoise = 1e-14; // -110 dBm
// 10 * 1e-14 * 100^2 / (kRho * 4)
inline constexpr double kSingleUserPower = 2.5301182210788355e-06;

inline uavbf::Scenario single_user_below(double altitude = 100.0) {
  uavbf::Scenario s;
  s.uav_initial = uavbf::Position3D(0, 0, altitude);
  s.aod = {{std::numbers::pi / 2, 0.0}};
  s.location = {{uavbf::Position2D::Zero(), 0.0}};
  s.truth.resize(1);
  return s;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

} // namespace testing
