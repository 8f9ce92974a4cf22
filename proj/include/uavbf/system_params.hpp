#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace uavbf {

inline constexpr double kSpeedOfLight = 299792458.0;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_watts(double dbm) { return 1e-3 * db_to_linear(dbm); }
inline double watts_to_dbm(double watts) { return linear_to_db(watts / 1e-3); }

/// Physical constants and limits of one downlink scenario.
///
/// Powers are linear watts throughout; dB/dBm only appear in the
/// conversion helpers and at the config/CSV boundary.
struct SystemParams {
  double carrier_freq = 2.4e9;      // Hz
  double bandwidth = 200e3;         // Hz, informational
  double antenna_spacing = 6.25e-2; // b, meters
  int n_antennas = 6;
  int n_users = 3;
  double altitude = 100.0; // z_0, meters

  std::vector<double> noise_power;     // per user, W
  std::vector<double> per_antenna_cap; // per antenna, W
  std::vector<double> sinr_req;        // per user, linear

  double gamma_margin_db = 0.3;

  double wavelength() const { return kSpeedOfLight / carrier_freq; }
  double spacing_ratio() const { return antenna_spacing / wavelength(); }
  /// Free-space constant (lambda / 4 pi)^2.
  double rho_const() const {
    const double r = wavelength() / (4.0 * std::numbers::pi);
    return r * r;
  }

  /// Table I defaults: -110 dBm noise, 20 dBm per antenna, 10 dB SINR target.
  static SystemParams defaults(int n_users, int n_antennas);

  /// Copy with every user's SINR target raised by `margin_db`.
  SystemParams with_sinr_margin(double margin_db) const;

  /// Throws std::invalid_argument describing the first violated invariant.
  void validate() const;
};

} // namespace uavbf
