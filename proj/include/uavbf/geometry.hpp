#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <stdexcept>

#include <Eigen/Dense>

#include "uavbf/system_params.hpp"

namespace uavbf {

template <typename Scalar>
using CVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;
template <typename Scalar>
using CMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

using Position2D = Eigen::Vector2d;
using Position3D = Eigen::Vector3d;

inline constexpr double kMinSeparation = 1e-9;

class CoincidentPointsError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// ULA response a(theta): entry n is exp(-j 2 pi (b/lambda) n cos(theta)).
template <typename Scalar>
CVector<Scalar> steering_vector(Scalar theta, int n_antennas, Scalar spacing_ratio) {
  const Scalar phase = -2 * std::numbers::pi_v<Scalar> * spacing_ratio * std::cos(theta);
  CVector<Scalar> a(n_antennas);
  for (int n = 0; n < n_antennas; ++n) a(n) = std::polar(Scalar(1), phase * Scalar(n));
  return a;
}

inline CVector<double> steering_vector(double theta, const SystemParams& p) {
  return steering_vector<double>(theta, p.n_antennas, p.spacing_ratio());
}

/// First-order expansion of the array response around an AoD estimate.
template <typename Scalar>
struct TaylorTerms {
  CVector<Scalar> a0; // response at the estimate
  CVector<Scalar> a1; // derivative with respect to theta

  CVector<Scalar> linearized(Scalar dtheta) const { return a0 + a1 * dtheta; }
  /// U = [a1, a0], the basis the C2a quadratic is written in.
  CMatrix<Scalar> basis() const {
    CMatrix<Scalar> u(a0.size(), 2);
    u.col(0) = a1;
    u.col(1) = a0;
    return u;
  }
};

template <typename Scalar>
TaylorTerms<Scalar> taylor_terms(Scalar theta_bar, int n_antennas, Scalar spacing_ratio) {
  TaylorTerms<Scalar> t;
  t.a0 = steering_vector<Scalar>(theta_bar, n_antennas, spacing_ratio);
  const Scalar slope = 2 * std::numbers::pi_v<Scalar> * spacing_ratio * std::sin(theta_bar);
  t.a1.resize(n_antennas);
  for (int n = 0; n < n_antennas; ++n)
    t.a1(n) = std::complex<Scalar>(0, slope * Scalar(n)) * t.a0(n);
  return t;
}

inline TaylorTerms<double> taylor_terms(double theta_bar, const SystemParams& p) {
  return taylor_terms<double>(theta_bar, p.n_antennas, p.spacing_ratio());
}

/// Exact (non-linearized) response at theta_bar + dtheta.
template <typename Scalar>
CVector<Scalar> nonlinear_aar(Scalar theta_bar, Scalar dtheta, int n_antennas, Scalar spacing_ratio) {
  return steering_vector<Scalar>(theta_bar + dtheta, n_antennas, spacing_ratio);
}

inline CVector<double> nonlinear_aar(double theta_bar, double dtheta, const SystemParams& p) {
  return nonlinear_aar<double>(theta_bar, dtheta, p.n_antennas, p.spacing_ratio());
}

/// Upper bound on |d^2 a / d theta^2| used for the Taylor remainder:
/// each entry's second derivative is bounded by c n (1 + c n), c = 2 pi b / lambda.
inline double steering_curvature_bound(int n_antennas, double spacing_ratio) {
  const double c = 2.0 * std::numbers::pi * spacing_ratio;
  double sum = 0.0;
  for (int n = 0; n < n_antennas; ++n) {
    const double e = c * n * (1.0 + c * n);
    sum += e * e;
  }
  return std::sqrt(sum);
}

inline double distance(const Position3D& r0, const Position3D& rk) {
  const double d = (r0 - rk).norm();
  if (!(d >= kMinSeparation)) throw CoincidentPointsError("UAV and user positions coincide");
  return d;
}

/// LoS channel sqrt(rho) / ||r0 - rk|| * a(theta).
inline CVector<double> channel_vector(const Position3D& r0, const Position3D& rk, double theta,
                                      const SystemParams& p) {
  return (std::sqrt(p.rho_const()) / distance(r0, rk)) * steering_vector(theta, p);
}

/// AoD measured from the array axis, which is aligned with global x.
inline double aod_from_geometry(const Position3D& r0, const Position3D& rk) {
  const double d = distance(r0, rk);
  return std::acos(std::clamp((rk.x() - r0.x()) / d, -1.0, 1.0));
}

template <typename Scalar>
Scalar sinr(int k, std::span<const CVector<Scalar>> beams, const CVector<Scalar>& h, Scalar noise) {
  Scalar interference = 0;
  Scalar signal = 0;
  for (int r = 0; r < static_cast<int>(beams.size()); ++r) {
    const Scalar g = std::norm(h.dot(beams[r])); // dot() conjugates h
    if (r == k)
      signal = g;
    else
      interference += g;
  }
  return signal / (interference + noise);
}

/// SINR with transmit covariances in place of beamformers.
template <typename Scalar>
Scalar sinr_covariance(int k, std::span<const CMatrix<Scalar>> covariances, const CVector<Scalar>& h,
                       Scalar noise) {
  Scalar interference = 0;
  Scalar signal = 0;
  for (int r = 0; r < static_cast<int>(covariances.size()); ++r) {
    const Scalar g = std::real(h.dot(covariances[r] * h));
    if (r == k)
      signal = g;
    else
      interference += g;
  }
  return signal / (interference + noise);
}

} // namespace uavbf
