#include "uavbf/system_params.hpp"

#include <string>

namespace uavbf {

SystemParams SystemParams::defaults(int n_users, int n_antennas) {
  SystemParams p;
  p.n_users = n_users;
  p.n_antennas = n_antennas;
  p.noise_power.assign(static_cast<std::size_t>(std::max(n_users, 0)), dbm_to_watts(-110.0));
  p.per_antenna_cap.assign(static_cast<std::size_t>(std::max(n_antennas, 0)), dbm_to_watts(20.0));
  p.sinr_req.assign(static_cast<std::size_t>(std::max(n_users, 0)), db_to_linear(10.0));
  return p;
}

SystemParams SystemParams::with_sinr_margin(double margin_db) const {
  SystemParams p = *this;
  for (double& g : p.sinr_req) g *= db_to_linear(margin_db);
  return p;
}

void SystemParams::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("SystemParams: " + what); };
  if (n_antennas < 1) fail("n_antennas must be >= 1");
  if (n_users < 1) fail("n_users must be >= 1");
  if (!(carrier_freq > 0.0) || !std::isfinite(carrier_freq)) fail("carrier_freq must be positive");
  if (!(antenna_spacing > 0.0) || !std::isfinite(antenna_spacing)) fail("antenna_spacing must be positive");
  if (!std::isfinite(altitude) || altitude < 0.0) fail("altitude must be finite and >= 0");
  if (noise_power.size() != static_cast<std::size_t>(n_users)) fail("noise_power needs one entry per user");
  if (sinr_req.size() != static_cast<std::size_t>(n_users)) fail("sinr_req needs one entry per user");
  if (per_antenna_cap.size() != static_cast<std::size_t>(n_antennas))
    fail("per_antenna_cap needs one entry per antenna");
  for (double v : noise_power)
    if (!(v > 0.0) || !std::isfinite(v)) fail("noise_power entries must be positive");
  for (double v : per_antenna_cap)
    if (!(v > 0.0) || std::isnan(v)) fail("per_antenna_cap entries must be positive");
  for (double v : sinr_req)
    if (!(v > 0.0) || !std::isfinite(v)) fail("sinr_req entries must be positive");
  if (!std::isfinite(gamma_margin_db)) fail("gamma_margin_db must be finite");
}

} // namespace uavbf
