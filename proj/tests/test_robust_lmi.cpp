#include <doctest.h>

#include <functional>
#include <numbers>
#include <random>

#include "support.hpp"
#include "uavbf/robust_lmi.hpp"
#include "uavbf/verify.hpp"

using namespace uavbf;
using std::numbers::pi;

namespace {

constexpr int kN = 4;

struct TwoUsers {
  std::vector<HermitianAffine> cov = {HermitianAffine::full(0, kN), HermitianAffine::full(kN * kN, kN)};
  int eta = 2 * kN * kN;
  int delta = 2 * kN * kN + 1;
  std::vector<double> x = std::vector<double>(2 * kN * kN + 2, 0.0);

  void set(int k, const Eigen::MatrixXcd& w) {
    for (const auto& [v, b] : cov[k].terms) x[v] = (b.adjoint() * w).trace().real() / b.squaredNorm();
  }
};

Eigen::MatrixXcd outer(const Eigen::VectorXcd& v) { return v * v.adjoint(); }

} // namespace

TEST_CASE("covariance coordinates reproduce the matrix") {
  TwoUsers u;
  Eigen::VectorXcd v(kN);
  v << std::complex<double>(1, 2), -0.5, std::complex<double>(0, 3), 2;
  u.set(0, outer(v));
  CHECK((u.cov[0].evaluate(u.x) - outer(v)).norm() < 1e-12);
}

TEST_CASE("endfire estimate decouples the C2a block") {
  TwoUsers u;
  const auto t = taylor_terms<double>(0.0, kN, 0.5);
  const auto c = build_c2a_lmi(0, u.cov, u.eta, u.delta, t, 0.1, 10.0);
  u.set(0, outer(t.a0) * 2.0);
  u.x[u.delta] = 0.7;
  u.x[u.eta] = 0.3;
  const Eigen::MatrixXd m = c.real_block().evaluate(u.x);
  CHECK(m(0, 1) == 0.0);
  CHECK(m(0, 0) == doctest::Approx(0.7));
  // a0^H W a0 - eta - delta alpha^2 with a0^H W a0 = 2 N^2.
  CHECK(m(1, 1) == doctest::Approx(2.0 * kN * kN - 0.3 - 0.7 * 0.01));
}

TEST_CASE("zero AoD radius gives the direct scalar constraint") {
  TwoUsers u;
  const auto t = taylor_terms<double>(1.0, kN, 0.5);
  const auto c = build_c2a_lmi(0, u.cov, u.eta, std::nullopt, t, 0.0, 10.0);
  const RealLmiBlock b = c.real_block();
  REQUIRE(b.dimension() == 1);
  Eigen::VectorXcd w0 = Eigen::VectorXcd::Random(kN), w1 = Eigen::VectorXcd::Random(kN);
  u.set(0, outer(w0));
  u.set(1, outer(w1));
  u.x[u.eta] = 0.25;
  const double expected = std::norm(t.a0.dot(w0)) - 10.0 * std::norm(t.a0.dot(w1)) - 0.25;
  CHECK(b.evaluate(u.x)(0, 0) == doctest::Approx(expected).epsilon(1e-12));
  CHECK_THROWS_AS(build_c2a_lmi(0, u.cov, u.eta, u.delta, t, 0.0, 10.0), std::invalid_argument);
}

TEST_CASE("zero assignment with negative slack is C2a feasible") {
  TwoUsers u;
  const auto t = taylor_terms<double>(1.3, kN, 0.5);
  const auto c = build_c2a_lmi(0, u.cov, u.eta, u.delta, t, 0.2, 10.0);
  u.x[u.eta] = -1.0;
  u.x[u.delta] = 0.0;
  const auto rep = verify_s_procedure(c.real_block(), c.quadratic, u.x);
  CHECK(rep.lmi_feasible);
  CHECK(rep.clean());
}

TEST_CASE("slack above the achievable worst case is flagged at the endpoint") {
  TwoUsers u;
  const double alpha = 0.2;
  const auto t = taylor_terms<double>(1.3, kN, 0.5);
  const auto c = build_c2a_lmi(0, u.cov, u.eta, u.delta, t, alpha, 10.0);
  // A beam whose linearized gain |p + dtheta q|^2 is smallest at an endpoint.
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  std::function<double(double)> gain;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Eigen::VectorXcd w(kN);
    for (int n = 0; n < kN; ++n) w(n) = {g(rng), g(rng)};
    const std::complex<double> p = t.a0.dot(w), q = t.a1.dot(w);
    const double vertex = -std::real(std::conj(p) * q) / std::norm(q);
    if (std::abs(vertex) > 1.5 * alpha) {
      u.set(0, outer(w));
      gain = [=](double d) { return std::norm(p + d * q); };
      break;
    }
  }
  REQUIRE(gain);
  const double worst = std::min(gain(alpha), gain(-alpha));
  REQUIRE(worst < gain(0.0));
  u.x[u.eta] = worst + 1e-3 * (gain(0.0) - worst);
  u.x[u.delta] = 1.0;
  const auto rep = verify_s_procedure(c.real_block(), c.quadratic, u.x);
  REQUIRE_FALSE(rep.violations.empty());
  bool endpoint = false;
  for (const auto& v : rep.violations) endpoint = endpoint || std::abs(std::abs(v.u(0)) - alpha) < 1e-12;
  CHECK(endpoint);
  CHECK_FALSE(rep.clean());
}

TEST_CASE("C2b without location radius is the direct distance bound") {
  const LocationUncertainty loc{{3, 4}, 0.0};
  const auto c = build_c2b_lmi(0, {0, 1, 2, std::nullopt, 3}, loc, 1.0);
  REQUIRE(c.main.dimension() == 1);
  std::vector<double> x = {0.0, 0.0, 0.0, 25.0};
  // eta >= t + z0^2 with t = ||r0 - center||^2 at the epigraph boundary.
  x[2] = 26.0;
  CHECK(c.main.evaluate(x)(0, 0) == doctest::Approx(0.0));
  CHECK(min_eigenvalue(c.epigraph.evaluate(x)) >= -1e-12);
  x[3] = 24.9;
  CHECK(min_eigenvalue(c.epigraph.evaluate(x)) < 0.0);
}

TEST_CASE("feasible C2b points cover the farthest location") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const LocationUncertainty loc{{u(rng), u(rng)}, 0.1 + 0.4 * (u(rng) + 1)};
    const auto c = build_c2b_lmi(0, {0, 1, 2, 3, 4}, loc, 1.0);
    std::vector<double> x = {u(rng), u(rng), 0.0, 0.0, 0.0};
    x[4] = (Position2D(x[0], x[1]) - loc.center).squaredNorm();
    const double dist = (Position2D(x[0], x[1]) - loc.center).norm();
    // Best multiplier for this position: mu = 1 + dist / D.
    x[3] = 1.0 + dist / loc.radius;
    double lo = 0.0, hi = 100.0;
    for (int it = 0; it < 200; ++it) {
      x[2] = 0.5 * (lo + hi);
      (min_eigenvalue(c.main.evaluate(x)) >= 0.0 ? hi : lo) = x[2];
    }
    x[2] = hi;
    const double wc = worst_case_distance_sq(Position2D(x[0], x[1]), loc, 1.0);
    CHECK(hi >= wc * (1 - 1e-9));
    CHECK(hi == doctest::Approx(wc).epsilon(1e-6));
  }
}

TEST_CASE("S-procedure sampling over random boundary instances") {
  const auto stats = s_procedure_sampling(2024, 100);
  CHECK(stats.instances == 100);
  CHECK(stats.lmi_infeasible == 0);
  CHECK(stats.violations == 0);
}
