#include <doctest.h>

#include <complex>
#include <numbers>

#include "support.hpp"
#include "uavbf/geometry.hpp"
#include "uavbf/verify.hpp"

using namespace uavbf;
using std::numbers::pi;
using cd = std::complex<double>;

TEST_CASE("steering vector special angles") {
  const auto broadside = steering_vector<double>(pi / 2, 4, 0.5);
  for (int n = 0; n < 4; ++n) CHECK(std::abs(broadside(n) - cd(1, 0)) < 1e-15);

  const auto endfire = steering_vector<double>(0.0, 2, 0.5);
  CHECK(std::abs(endfire(1) - cd(-1, 0)) < 1e-15);

  const auto third = steering_vector<double>(pi / 3, 2, 0.5);
  CHECK(std::abs(third(0) - cd(1, 0)) < 1e-15);
  CHECK(std::abs(third(1) - cd(0, -1)) < 1e-15);
}

TEST_CASE("steering vector is templated on the scalar") {
  const auto d = steering_vector<double>(0.7, 5, 0.5);
  const auto l = steering_vector<long double>(0.7L, 5, 0.5L);
  for (int n = 0; n < 5; ++n) CHECK(std::abs(cd(l(n)) - d(n)) < 1e-14);
}

TEST_CASE("Taylor terms") {
  const auto t = taylor_terms<double>(pi / 2, 3, 0.5);
  CHECK(std::abs(t.a1(0)) < 1e-15);
  CHECK(std::abs(t.a1(1) - cd(0, pi)) < 1e-14);
  CHECK(std::abs(t.a1(2) - cd(0, 2 * pi)) < 1e-14);

  const auto flat = taylor_terms<double>(0.0, 5, 0.5);
  CHECK(flat.a1.norm() == 0.0);
  CHECK(flat.linearized(0.3) == flat.a0);
}

TEST_CASE("finite-difference derivative error is first order in the step") {
  for (double theta : {0.3, 1.0, pi / 2, 2.5}) {
    const auto e = taylor_fd_errors(theta, 6, 0.5, {1e-3, 1e-4, 1e-5});
    CHECK(e[0] / e[1] == doctest::Approx(10.0).epsilon(0.02));
    CHECK(e[1] / e[2] == doctest::Approx(10.0).epsilon(0.02));
  }
}

TEST_CASE("exact response and Taylor remainder") {
  CHECK(nonlinear_aar<double>(1.1, 0.0, 4, 0.5) == steering_vector<double>(1.1, 4, 0.5));
  const auto shifted = nonlinear_aar<double>(pi / 3, pi / 6, 4, 0.5);
  CHECK((shifted - Eigen::VectorXcd::Ones(4)).norm() < 1e-14);

  // Numerical sup of the second derivative over theta, independent of the
  // closed-form bound in the library.
  const int n = 6;
  double sup = 0.0;
  const double h = 1e-4;
  for (int i = 0; i <= 400; ++i) {
    const double th = pi * i / 400.0;
    const auto d2 = (steering_vector<double>(th + h, n, 0.5) - 2.0 * steering_vector<double>(th, n, 0.5) +
                     steering_vector<double>(th - h, n, 0.5)) / (h * h);
    sup = std::max(sup, d2.norm());
  }
  CHECK(sup <= steering_curvature_bound(n, 0.5) * (1 + 1e-6));

  const auto t = taylor_terms<double>(pi / 2, n, 0.5);
  for (double dt : {0.1, 0.03, 0.01, 0.001}) {
    const double rem = (nonlinear_aar<double>(pi / 2, dt, n, 0.5) - t.linearized(dt)).norm();
    CHECK(rem <= 0.5 * sup * dt * dt * (1 + 1e-3));
  }
}

TEST_CASE("channel vector path loss") {
  const SystemParams p = SystemParams::defaults(1, 4);
  CHECK(p.rho_const() == doctest::Approx(testing::kRho).epsilon(1e-12));

  const Position3D uav(0, 0, 100), below(0, 0, 0);
  const auto h = channel_vector(uav, below, aod_from_geometry(uav, below), p);
  CHECK(h.squaredNorm() == doctest::Approx(testing::kRho * 4 / 1e4).epsilon(1e-12));

  const Position3D far(0, 0, -100);
  CHECK(channel_vector(uav, far, pi / 2, p).norm() == doctest::Approx(h.norm() / 2).epsilon(1e-12));
}

TEST_CASE("single-user SINR closed form") {
  const SystemParams p = SystemParams::defaults(1, 4);
  const Position3D uav(0, 0, 100), below(0, 0, 0);
  const auto h = channel_vector(uav, below, pi / 2, p);
  const double power = testing::kSingleUserPower;
  const std::vector<Eigen::VectorXcd> w = {std::sqrt(power) * h / h.norm()};
  CHECK(sinr<double>(0, w, h, testing::kNoise) == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(single_user_power(p) == doctest::Approx(testing::kSingleUserPower).epsilon(1e-12));

  Eigen::VectorXcd ortho(4);
  ortho << 1, -1, 1, -1;
  const std::vector<Eigen::VectorXcd> null = {ortho};
  CHECK(sinr<double>(0, null, h, testing::kNoise) == doctest::Approx(0.0));
}

TEST_CASE("angle of departure from geometry") {
  const Position3D uav(10, -5, 100);
  CHECK(aod_from_geometry(uav, {10, -5, 0}) == doctest::Approx(pi / 2));
  CHECK(aod_from_geometry(uav, {110, -5, 0}) == doctest::Approx(pi / 4));
  CHECK(aod_from_geometry(uav, {10 - 1e7, -5, 0}) == doctest::Approx(pi).epsilon(1e-4));
  CHECK_THROWS_AS(aod_from_geometry(uav, uav), CoincidentPointsError);
}
