#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "support.hpp"
#include "uavbf/config.hpp"
#include "uavbf/experiments.hpp"

using namespace uavbf;

namespace {

int count_lines(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

ExperimentRecord record(Scheme scheme, RecordStatus status, double power, bool pass = false) {
  ExperimentRecord r;
  r.scheme = scheme;
  r.point = {6, 0.05, 20.0, 10.0};
  r.status = status;
  r.total_power = power;
  r.qos_pass = pass;
  return r;
}

} // namespace

TEST_CASE("scenario generation") {
  ExperimentConfig c;
  c.seed = 99;
  const SweepPoint pt{6, 0.05, 20.0, 10.0};

  SUBCASE("deterministic in seed and index") {
    const Scenario a = generate_scenario(c, pt, 3), b = generate_scenario(c, pt, 3), d = generate_scenario(c, pt, 4);
    CHECK(a.uav_initial == b.uav_initial);
    CHECK(a.location[1].center == b.location[1].center);
    CHECK(a.truth[2].delta_theta == b.truth[2].delta_theta);
    CHECK(a.location[0].center != d.location[0].center);
  }
  SUBCASE("truth inside the uncertainty sets, UAV over the centroid") {
    for (int i = 0; i < 50; ++i) {
      const Scenario s = generate_scenario(c, pt, i);
      Position2D centroid = Position2D::Zero();
      for (int k = 0; k < s.n_users(); ++k) {
        centroid += s.location[k].center / s.n_users();
        CHECK(s.truth[k].delta_r.norm() <= 20.0 * (1 + 1e-12));
        CHECK(s.aod[k].alpha == doctest::Approx(0.05 * s.aod[k].theta_bar));
        CHECK(std::abs(s.truth[k].delta_theta) <= s.aod[k].alpha);
        const Position3D est(s.location[k].center.x(), s.location[k].center.y(), 0);
        CHECK(s.aod[k].theta_bar == doctest::Approx(aod_from_geometry(s.uav_initial, est)));
      }
      CHECK((s.uav_initial.head<2>() - centroid).norm() < 1e-9);
      CHECK(s.uav_initial.z() == 100.0);
    }
  }
  SUBCASE("no uncertainty means exact estimates") {
    const Scenario s = generate_scenario(c, {6, 0.0, 0.0, 10.0}, 0);
    for (int k = 0; k < s.n_users(); ++k) {
      CHECK(s.truth[k].delta_r.isZero());
      CHECK(s.true_aod(k) == s.aod[k].theta_bar);
    }
  }
  SUBCASE("true positions follow the uniform-disk radial law") {
    ExperimentConfig big = c;
    big.n_users = 10000;
    const Scenario s = generate_scenario(big, {6, 0.0, 0.0, 10.0}, 0);
    std::vector<double> r;
    for (int k = 0; k < s.n_users(); ++k) r.push_back(s.true_location(k).norm());
    std::sort(r.begin(), r.end());
    double ks = 0.0;
    const double n = static_cast<double>(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
      const double cdf = r[i] * r[i] / (500.0 * 500.0);
      ks = std::max({ks, std::abs(cdf - i / n), std::abs(cdf - (i + 1) / n)});
    }
    CHECK(ks < 0.02);
  }
  SUBCASE("mismatch moves the truth outside the disk") {
    ExperimentConfig m = c;
    m.mismatch = true;
    const Scenario s = generate_scenario(m, pt, 1);
    for (int k = 0; k < s.n_users(); ++k) CHECK(s.truth[k].delta_r.norm() > 20.0);
  }
  SUBCASE("fixed estimates") {
    ExperimentConfig f = c;
    f.n_users = 2;
    f.user_positions = {Position2D(10, 0), Position2D(-10, 50)};
    const Scenario s = generate_scenario(f, pt, 2);
    CHECK(s.location[1].center == Position2D(-10, 50));
    CHECK(s.uav_initial.head<2>() == Position2D(0, 25));
    CHECK(s.truth[0].delta_r.norm() <= 20.0);
  }
}

TEST_CASE("sweep points vary one axis") {
  ExperimentConfig c;
  c.rho = {0.01, 0.05};
  c.sinr_db = {10, 6, 8};
  const auto pts = sweep_points(c, SweepAxis::sinr);
  REQUIRE(pts.size() == 3);
  CHECK(pts[1].sinr_db == 6.0);
  CHECK(pts[1].rho == 0.01);
  CHECK(sweep_points(c, SweepAxis::rho).size() == 2);
}

TEST_CASE("single user with exact CSI meets the closed form on every realization") {
  ExperimentConfig c;
  c.n_users = 1;
  c.n_antennas = {4};
  c.rho = {0.0};
  c.radius = {0.0};
  c.gamma_margin_db = 0.0;
  c.realizations = 8;
  c.schemes = {Scheme::proposed};
  const auto recs = run_point(c, {4, 0.0, 0.0, 10.0});
  REQUIRE(recs.size() == 8);
  for (const auto& r : recs) {
    REQUIRE(r.succeeded());
    CHECK(testing::rel(r.total_power, testing::kSingleUserPower) < 1e-3);
    CHECK(r.qos_pass);
    CHECK(r.realized_pass);
  }
}

TEST_CASE("run_point records and CSV") {
  ExperimentConfig c;
  c.realizations = 4;
  c.rho = {0.01};
  c.threads = 1;
  const SweepPoint pt{6, 0.01, 20.0, 10.0};
  const auto recs = run_point(c, pt);
  REQUIRE(recs.size() == 16);
  for (std::size_t i = 0; i < recs.size(); ++i) {
    CHECK(recs[i].realization == static_cast<int>(i / 4));
    CHECK(recs[i].scheme == c.schemes[i % 4]);
    if (recs[i].succeeded()) CHECK(recs[i].total_power_dbm() == doctest::Approx(10 * std::log10(recs[i].total_power / 1e-3)));
    if (recs[i].succeeded() && recs[i].scheme != Scheme::nonrobust) CHECK(recs[i].linear_margin_db >= 0.3 - 1e-5);
  }

  std::ostringstream a, b;
  write_records_csv(a, recs);
  ExperimentConfig par = c;
  par.threads = 4;
  write_records_csv(b, run_point(par, pt));
  CHECK(a.str() == b.str());
  CHECK(count_lines(a.str()) == 17);
  CHECK(a.str().substr(0, csv_header().size()) == csv_header());

  std::ostringstream timed;
  write_records_csv(timed, recs, {true});
  CHECK(timed.str().find("solve_time_s") != std::string::npos);
}

TEST_CASE("non-robust final power at least proposed on 95% of realizations" * doctest::may_fail()) {
  ExperimentConfig c;
  c.realizations = 100;
  c.drop_c1 = true;
  c.schemes = {Scheme::proposed, Scheme::nonrobust};
  const auto recs = run_point(c, {6, 0.05, 20.0, 10.0});
  int both = 0, higher = 0;
  for (std::size_t i = 0; i + 1 < recs.size(); i += 2) {
    if (!recs[i].succeeded() || !recs[i + 1].succeeded()) continue;
    ++both;
    if (recs[i + 1].total_power >= recs[i].total_power) ++higher;
  }
  REQUIRE(both > 0);
  MESSAGE(higher << " of " << both << " jointly solved realizations");
  CHECK(higher >= 0.95 * both);
}

TEST_CASE("aggregation") {
  SUBCASE("linear-domain mean") {
    const std::vector<ExperimentRecord> recs = {record(Scheme::proposed, RecordStatus::optimal, 1e-3, true),
                                                record(Scheme::proposed, RecordStatus::optimal, 3e-3, false)};
    const auto rows = aggregate(recs);
    REQUIRE(rows.size() == 1);
    CHECK(*rows[0].mean_power == doctest::Approx(2e-3));
    CHECK(*rows[0].mean_power_dbm() == doctest::Approx(3.0103).epsilon(1e-4));
    CHECK(rows[0].qos_pass_rate == 0.5);
  }
  SUBCASE("all infeasible") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const std::vector<ExperimentRecord> recs = {record(Scheme::zf, RecordStatus::infeasible, nan),
                                                record(Scheme::zf, RecordStatus::infeasible, nan)};
    const auto rows = aggregate(recs);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].infeasible == 2);
    CHECK_FALSE(rows[0].mean_power.has_value());
    CHECK(rows[0].qos_pass_rate == 0.0);
  }
  SUBCASE("permutation invariant") {
    std::vector<ExperimentRecord> recs;
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> p(1e-4, 1e-2);
    for (int i = 0; i < 40; ++i) {
      auto r = record(i % 2 ? Scheme::mrt : Scheme::proposed, i % 5 ? RecordStatus::optimal : RecordStatus::outage,
                      p(rng), i % 3 == 0);
      r.point.rho = i % 4 ? 0.05 : 0.1;
      recs.push_back(r);
    }
    const auto ra = aggregate(recs);
    std::shuffle(recs.begin(), recs.end(), rng);
    const auto rb = aggregate(recs);
    REQUIRE(ra.size() == rb.size());
    for (std::size_t i = 0; i < ra.size(); ++i) {
      CHECK(ra[i].point == rb[i].point);
      CHECK(ra[i].succeeded == rb[i].succeeded);
      CHECK(*ra[i].mean_power == doctest::Approx(*rb[i].mean_power).epsilon(1e-14));
      CHECK(ra[i].qos_pass_rate == rb[i].qos_pass_rate);
    }
  }
  SUBCASE("empty input") {
    CHECK_THROWS_AS(aggregate(std::vector<ExperimentRecord>{}), std::invalid_argument);
  }
}

TEST_CASE("config parsing") {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return parse_config(in, "test.cfg");
  };

  SUBCASE("values and defaults") {
    const auto c = parse("# comment\nseed = 7\nrho = 0.01, 0.05 # trailing\nschemes = proposed,mrt\ndrop_c1 = true\n");
    CHECK(c.seed == 7);
    CHECK(c.rho == std::vector<double>{0.01, 0.05});
    CHECK(c.schemes == std::vector<Scheme>{Scheme::proposed, Scheme::mrt});
    CHECK(c.drop_c1);
    CHECK(c.realizations == 100);
    CHECK(c.gamma_margin_db == 0.3);
  }
  SUBCASE("round trip") {
    ExperimentConfig c;
    c.sinr_db = {6, 8.5};
    c.noise_dbm = -107.25;
    c.user_positions = {Position2D(1, 2), Position2D(-3, 4), Position2D(0, 0)};
    std::istringstream in(format_config(c));
    CHECK(format_config(parse_config(in)) == format_config(c));
  }
  auto error_of = [&](const std::string& text) -> std::pair<int, std::string> {
    try {
      parse(text);
    } catch (const ConfigError& e) {
      return {e.line(), e.field()};
    }
    return {-1, ""};
  };
  SUBCASE("diagnostics carry line and field") {
    CHECK(error_of("seed = 1\nbogus = 3\n") == std::pair<int, std::string>{2, "bogus"});
    CHECK(error_of("rho = 0.1, x\n") == std::pair<int, std::string>{1, "rho"});
    CHECK(error_of("seed = 1\n\nseed = 2\n") == std::pair<int, std::string>{3, "seed"});
    CHECK(error_of("users =\n") == std::pair<int, std::string>{1, "users"});
    CHECK(error_of("\nrealizations = 0\n") == std::pair<int, std::string>{2, "realizations"});
    CHECK(error_of("sinr_db = 10, inf\n").second == "sinr_db");
    CHECK(error_of("schemes = proposed, best\n") == std::pair<int, std::string>{1, "schemes"});
    CHECK(error_of("just text\n").first == 1);
    CHECK(error_of("rho = -0.1\n") == std::pair<int, std::string>{1, "rho"});
  }
  SUBCASE("message format") {
    try {
      parse("\n\nantennas = four\n");
      FAIL("expected an error");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()) == "test.cfg:3: field 'antennas': 'four' is not a valid number");
    }
  }
  CHECK_THROWS_AS(load_config("/nonexistent/file.cfg"), ConfigError);
}
