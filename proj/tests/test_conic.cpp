#include <doctest.h>

#include <numbers>
#include <random>

#include "support.hpp"
#include "uavbf/robust_problem.hpp"

using namespace uavbf;
using std::numbers::pi;
using cd = std::complex<double>;

TEST_CASE("real embedding") {
  Eigen::MatrixXcd w(2, 2);
  w << 1, cd(0, 1), cd(0, -1), 1;
  const Eigen::MatrixXd e = realify(w);
  REQUIRE(e.rows() == 4);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(e);
  const Eigen::Vector4d expected(0, 0, 2, 2);
  CHECK((es.eigenvalues() - expected).norm() < 1e-12);

  Eigen::MatrixXcd real_w(2, 2);
  real_w << 2, 0.5, 0.5, 3;
  const Eigen::MatrixXd r = realify(real_w);
  CHECK(r.topRightCorner(2, 2).isZero());
  CHECK(r.topLeftCorner(2, 2) == r.bottomRightCorner(2, 2));

  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int n = 1; n <= 6; ++n) {
    Eigen::MatrixXcd a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = {g(rng), g(rng)};
    const Eigen::MatrixXcd h = a + a.adjoint();
    CHECK(realify(h).trace() == doctest::Approx(2 * h.trace().real()));
    CHECK((derealify(realify(h)) - h).norm() <= 1e-12 * h.norm());
    // <realify(B), M> == Re tr(B H) for the adjoint H of M.
    const Eigen::MatrixXd m = realify(a * a.adjoint());
    CHECK((realify(h).cwiseProduct(m)).sum() == doctest::Approx((h * embedding_adjoint(m)).trace().real()));
  }
}

TEST_CASE("scaled packing preserves inner products") {
  const Eigen::MatrixXd ra = Eigen::MatrixXd::Random(4, 4), rb = Eigen::MatrixXd::Random(4, 4);
  const Eigen::MatrixXd a = ra + ra.transpose(), b = rb + rb.transpose();
  CHECK(svec(a).dot(svec(b)) == doctest::Approx((a * b).trace()));
  CHECK((smat(svec(a)) - a).norm() < 1e-14);
}

TEST_CASE("interior-point method on small programs") {
  SUBCASE("2x2 coupling") {
    LmiProgram p;
    p.n_vars = 2;
    p.cost = Eigen::Vector2d(1, 1);
    RealLmiBlock b("pair", 2);
    b.constant << 0, 1, 1, 0;
    b.add(0, (Eigen::MatrixXd(2, 2) << 1, 0, 0, 0).finished());
    b.add(1, (Eigen::MatrixXd(2, 2) << 0, 0, 0, 1).finished());
    p.blocks = {b};
    for (auto prec : {SolverPrecision::standard, SolverPrecision::extended}) {
      SolverOptions o;
      o.precision = prec;
      const auto r = solve_lmi(p, o);
      REQUIRE(r.status == SolveStatus::optimal);
      CHECK(r.primal_objective == doctest::Approx(2.0).epsilon(1e-7));
      CHECK(r.dual_objective == doctest::Approx(2.0).epsilon(1e-7));
      CHECK(r.x(0) == doctest::Approx(1.0).epsilon(1e-4));
    }
  }
  SUBCASE("contradictory bounds") {
    LmiProgram p;
    p.n_vars = 1;
    p.cost = Eigen::VectorXd::Ones(1);
    RealLmiBlock lo("lower", 1), hi("upper", 1);
    lo.constant(0, 0) = -1;
    lo.add(0, Eigen::MatrixXd::Ones(1, 1));
    hi.add(0, -Eigen::MatrixXd::Ones(1, 1));
    p.blocks = {lo, hi};
    CHECK(solve_lmi(p).status == SolveStatus::infeasible);
  }
}

TEST_CASE("variable counts") {
  auto scenario = [](int k, double alpha, double radius) {
    Scenario s;
    s.uav_initial = Position3D(0, 0, 100);
    for (int i = 0; i < k; ++i) {
      s.aod.push_back({1.0 + 0.3 * i, alpha});
      s.location.push_back({Position2D(40.0 * i, -20.0 * i), radius});
    }
    s.truth.resize(k);
    return s;
  };
  CHECK(assemble(scenario(1, 0.05, 20), SystemParams::defaults(1, 2)).n_vars() == 10);
  CHECK(assemble(scenario(3, 0.05, 20), SystemParams::defaults(3, 6)).n_vars() == 122);
  // Degenerate sets drop their multipliers.
  CHECK(assemble(scenario(3, 0.0, 0.0), SystemParams::defaults(3, 6)).n_vars() == 116);

  const auto a = serialize(assemble(scenario(2, 0.05, 20), SystemParams::defaults(2, 4)));
  const auto b = serialize(assemble(scenario(2, 0.05, 20), SystemParams::defaults(2, 4)));
  CHECK(a == b);
}

TEST_CASE("single user below the UAV matches the closed form") {
  const SystemParams p = SystemParams::defaults(1, 4);
  auto sol = solve(assemble(testing::single_user_below(), p));
  REQUIRE(sol.optimal());
  CHECK(testing::rel(sol.objective, testing::kSingleUserPower) < 1e-3);
  CHECK(sol.position.norm() < 1e-3);
  const auto w = extract_beamformers(sol);
  CHECK(testing::rel(w[0].squaredNorm(), testing::kSingleUserPower) < 1e-3);
  CHECK(sol.warnings.empty());
}

TEST_CASE("per-antenna caps make high targets infeasible") {
  // Four antennas at 100 mW each carry at most 0.4 W, i.e. a target of about 62 dB.
  SystemParams p = SystemParams::defaults(1, 4);
  p.sinr_req = {db_to_linear(55.0)};
  CHECK(solve(assemble(testing::single_user_below(), p)).optimal());
  p.sinr_req = {db_to_linear(65.0)};
  CHECK(solve(assemble(testing::single_user_below(), p)).status == SolveStatus::infeasible);
  AssemblyOptions free;
  free.include_c1 = false;
  CHECK(solve(assemble(testing::single_user_below(), p, free)).optimal());
}

TEST_CASE("orthogonal users decouple") {
  // b / lambda = 1/2: a(pi/2) = (1, 1) and a(0) = (1, -1).
  SystemParams p = SystemParams::defaults(2, 2);
  p.antenna_spacing = p.wavelength() / 2;
  Scenario s;
  s.uav_initial = Position3D(0, 0, 100);
  s.aod = {{pi / 2, 0.0}, {0.0, 0.0}};
  s.location = {{Position2D(-30, 0), 0.0}, {Position2D(50, 40), 0.0}};
  s.truth.resize(2);
  const auto sol = solve(assemble(s, p));
  REQUIRE(sol.optimal());
  // Hover point minimizes the summed squared distances: the midpoint.
  const double sep2 = (s.location[0].center - s.location[1].center).squaredNorm();
  const double expected = 10.0 * testing::kNoise * (sep2 / 2 + 2 * 1e4) / (testing::kRho * 2);
  CHECK(testing::rel(sol.objective, expected) < 1e-6);
  CHECK((sol.position - Position2D(10, 20)).norm() < 1e-3);
}

TEST_CASE("robust designs are rank one and satisfy the optimality conditions") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-150.0, 150.0), ang(0.3, pi - 0.3);
  int solved = 0;
  for (int i = 0; i < 10; ++i) {
    const int k = 2 + i % 2;
    Scenario s;
    s.uav_initial = Position3D(0, 0, 100);
    for (int j = 0; j < k; ++j) {
      const Position2D c(u(rng), u(rng));
      const double th = aod_from_geometry(s.uav_initial, Position3D(c.x(), c.y(), 0));
      s.aod.push_back({th, 0.05 * th});
      s.location.push_back({c, 10.0 + 10.0 * (i % 2)});
    }
    s.truth.resize(k);
    const SystemParams p = SystemParams::defaults(k, i % 3 ? 6 : 4);
    const RobustProblem prob = assemble(s, p);
    auto sol = solve(prob);
    if (!sol.optimal()) continue;
    ++solved;
    CHECK(sol.max_rank_ratio() <= kRankTolerance);
    CHECK(sol.report.relative_gap <= 1e-7);
    const auto kkt = kkt_diagnostics(prob, sol);
    CHECK(kkt.available);
    CHECK(kkt.passed());
    for (const auto& user : kkt.users) {
      CHECK(std::abs(user.nu_max - 1.0) <= 1e-4);
      CHECK(user.complementarity <= 1e-6);
    }
  }
  CHECK(solved >= 7);
}

TEST_CASE("principal factor") {
  Eigen::MatrixXcd w(2, 2);
  w << 1, cd(0, 1), cd(0, -1), 1;
  const auto f = principal_factor(w);
  CHECK(std::abs(f.w(0) - cd(1, 0)) < 1e-12);
  CHECK(std::abs(f.w(1) - cd(0, -1)) < 1e-12);
  CHECK(f.rank_ratio < 1e-12);

  const Eigen::VectorXcd a = steering_vector<double>(1.1, 4, 0.5);
  const auto g = principal_factor(0.8 * a * a.adjoint() / 4.0);
  const Eigen::VectorXcd expected = std::sqrt(0.8 / 4.0) * a * std::conj(a(0)) / std::abs(a(0));
  CHECK((g.w - expected).norm() < 1e-12);
}
