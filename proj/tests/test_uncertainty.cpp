#include <doctest.h>

#include <numbers>
#include <random>

#include "support.hpp"
#include "uavbf/robust_problem.hpp"
#include "uavbf/uncertainty.hpp"

using namespace uavbf;
using std::numbers::pi;

TEST_CASE("realization sampling") {
  const AodUncertainty none_aod{1.0, 0.0};
  const LocationUncertainty none_loc{{3, 4}, 0.0};
  const auto zero = sample_realization(7, none_aod, none_loc);
  CHECK(zero.delta_theta == 0.0);
  CHECK(zero.delta_r.isZero());

  const AodUncertainty aod{1.0, 0.2};
  const LocationUncertainty loc{{0, 0}, 20.0};
  const auto a = sample_realization(42, aod, loc), b = sample_realization(42, aod, loc);
  CHECK(a.delta_theta == b.delta_theta);
  CHECK(a.delta_r == b.delta_r);

  // Uniform disk: E||dr||^2 = D^2 / 2.
  std::mt19937_64 rng(5);
  double sum = 0.0, sum_theta = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const auto t = sample_realization(rng, aod, loc);
    sum += t.delta_r.squaredNorm();
    sum_theta += t.delta_theta;
    REQUIRE(std::abs(t.delta_theta) <= aod.alpha);
    REQUIRE(t.delta_r.norm() <= loc.radius);
  }
  CHECK(sum / n == doctest::Approx(200.0).epsilon(0.02));
  CHECK(std::abs(sum_theta / n) < 0.01 * aod.alpha);
}

TEST_CASE("worst-case distance closed form") {
  const LocationUncertainty loc{{30, 40}, 20.0};
  CHECK(worst_case_distance_sq({0, 0}, loc, 100.0) == doctest::Approx(14900.0));
  CHECK(worst_case_distance_sq({0, 0}, {{30, 40}, 0.0}, 100.0) == doctest::Approx(12500.0));
  CHECK(worst_case_distance_sq({30, 40}, loc, 100.0) == doctest::Approx(10400.0));

  double sampled = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double phi = 2 * pi * i / 10000.0;
    const Position2D p = loc.center + 20.0 * Position2D(std::cos(phi), std::sin(phi));
    sampled = std::max(sampled, p.squaredNorm() + 1e4);
  }
  CHECK(sampled == doctest::Approx(14900.0).epsilon(1e-6));
  CHECK((worst_case_location({0, 0}, loc) - Position2D(42, 56)).norm() < 1e-12);
}

TEST_CASE("uncertainty set validation") {
  CHECK_THROWS_AS((AodUncertainty{1.0, -0.1}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((LocationUncertainty{{0, 0}, -1.0}.validate()), std::invalid_argument);
}

TEST_CASE("oracles without uncertainty reduce to the nominal SINR") {
  const SystemParams p = SystemParams::defaults(2, 4);
  Scenario sc;
  sc.uav_initial = Position3D(0, 0, 100);
  sc.aod = {{1.2, 0.0}, {2.1, 0.0}};
  sc.location = {{Position2D(-50, 20), 0.0}, {Position2D(70, -10), 0.0}};
  sc.truth.resize(2);
  Eigen::VectorXcd w0 = steering_vector<double>(1.2, 4, p.spacing_ratio()) * 1e-2;
  Eigen::VectorXcd w1 = steering_vector<double>(2.1, 4, p.spacing_ratio()) * 2e-2;
  const std::vector<Eigen::MatrixXcd> cov = {w0 * w0.adjoint(), w1 * w1.adjoint()};
  const std::vector<Eigen::VectorXcd> beams = {w0, w1};
  const Position2D uav(10, 0);
  const auto lin = worst_case_sinr_oracle(cov, uav, sc, p, AarModel::linearized);
  const auto nl = worst_case_sinr_oracle(cov, uav, sc, p, AarModel::nonlinear);
  for (int k = 0; k < 2; ++k) {
    const Position3D r0(uav.x(), uav.y(), 100), rk(sc.location[k].center.x(), sc.location[k].center.y(), 0);
    const auto h = channel_vector(r0, rk, sc.aod[k].theta_bar, p);
    const double nominal = sinr<double>(k, beams, h, p.noise_power[k]);
    CHECK(lin[k] == doctest::Approx(nominal).epsilon(1e-12));
    CHECK(nl[k] == doctest::Approx(nominal).epsilon(1e-12));
  }
}

TEST_CASE("oracle grid refinement converges") {
  const SystemParams p = SystemParams::defaults(2, 6);
  Scenario sc;
  sc.uav_initial = Position3D(0, 0, 100);
  sc.aod = {{1.0, 0.05}, {2.0, 0.1}};
  sc.location = {{Position2D(-80, 30), 20.0}, {Position2D(90, -40), 20.0}};
  sc.truth.resize(2);
  const auto sol = solve(assemble(sc, p));
  REQUIRE(sol.optimal());
  const auto coarse = worst_case_sinr_oracle(sol, sc, p, AarModel::linearized, {101, 64});
  const auto fine = worst_case_sinr_oracle(sol, sc, p, AarModel::linearized, {1001, 256});
  for (int k = 0; k < 2; ++k) {
    CHECK(testing::rel(coarse[k], fine[k]) < 1e-3);
    CHECK(coarse[k] >= p.sinr_req[k] * (1 - 1e-6));
  }
}
