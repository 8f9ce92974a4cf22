#include "uavbf/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "uavbf/baselines.hpp"
#include "uavbf/config.hpp"
#include "uavbf/experiments.hpp"
#include "uavbf/robust_lmi.hpp"
#include "uavbf/robust_problem.hpp"

namespace uavbf {

namespace {

using Rng = std::mt19937_64;
constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
  std::ostringstream o;
  o.precision(3);
  o << v;
  return o.str();
}

Eigen::MatrixXcd random_hermitian(Rng& rng, int n) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = {g(rng), g(rng)};
  return (a + a.adjoint()) / 2.0;
}

Eigen::MatrixXcd random_psd(Rng& rng, int n, int rank) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd f(n, rank);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < rank; ++j) f(i, j) = {g(rng), g(rng)};
  return f * f.adjoint() / double(n);
}

/// Coordinates of w in the orthogonal basis of a full HermitianAffine.
void write_coordinates(const HermitianAffine& basis, const Eigen::MatrixXcd& w, std::vector<double>& x) {
  for (const auto& [v, b] : basis.terms) x[v] = (b.adjoint() * w).trace().real() / b.squaredNorm();
}

/// Bisects x[var] between a PSD and a non-PSD value; leaves the last PSD one.
double boundary_value(const RealLmiBlock& block, std::vector<double>& x, int var, double feasible, double infeasible) {
  auto ok = [&](double v) {
    x[var] = v;
    const Eigen::MatrixXd m = block.evaluate(x);
    return min_eigenvalue(m) >= 0.0;
  };
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (feasible + infeasible);
    if (mid == feasible || mid == infeasible) break;
    (ok(mid) ? feasible : infeasible) = mid;
  }
  x[var] = feasible;
  return feasible;
}

class Suite {
 public:
  explicit Suite(std::string name) : name_(std::move(name)) {}

  void check(const std::string& what, bool passed, const std::string& detail = {}) {
    results_.push_back({name_, what, passed, detail});
  }
  std::vector<CheckResult> take() { return std::move(results_); }

 private:
  std::string name_;
  std::vector<CheckResult> results_;
};

std::vector<CheckResult> geometry_suite(const VerifyOptions& o) {
  Suite s("geometry");
  Rng rng(o.seed);
  std::uniform_real_distribution<double> angle(0.0, kPi);

  double modulus_err = 0.0, norm_err = 0.0;
  for (int i = 0; i < o.instances; ++i) {
    const int n = 1 + i % 8;
    const auto a = steering_vector<double>(angle(rng), n, 0.5);
    modulus_err = std::max(modulus_err, (a.cwiseAbs().array() - 1.0).abs().maxCoeff());
    norm_err = std::max(norm_err, std::abs(a.squaredNorm() - n) / n);
  }
  s.check("steering entries have unit modulus", modulus_err <= 1e-14, "max error " + fmt(modulus_err));
  s.check("steering norm squared equals antenna count", norm_err <= 1e-14, "max error " + fmt(norm_err));

  const auto broadside = steering_vector<double>(kPi / 2, 6, 0.5);
  s.check("broadside response is all ones", (broadside.array() - 1.0).abs().maxCoeff() <= 1e-15);

  double worst_ratio_dev = 0.0;
  for (int i = 0; i < o.instances; ++i) {
    const double t = 0.2 + (kPi - 0.4) * (i + 0.5) / o.instances;
    const auto e = taylor_fd_errors(t, 6, 0.5, {1e-3, 1e-4, 1e-5});
    for (int j = 0; j + 1 < 3; ++j) worst_ratio_dev = std::max(worst_ratio_dev, std::abs(std::log10(e[j] / e[j + 1]) - 1.0));
  }
  s.check("Taylor derivative error shrinks linearly in the step", worst_ratio_dev <= 0.1,
          "max |log10 ratio - 1| " + fmt(worst_ratio_dev));

  double aod_err = 0.0;
  bool in_range = true;
  std::uniform_real_distribution<double> coord(-500.0, 500.0);
  for (int i = 0; i < o.instances; ++i) {
    const Position3D r0(coord(rng), coord(rng), 100.0), rk(coord(rng), coord(rng), 0.0);
    const double th = aod_from_geometry(r0, rk);
    in_range = in_range && th >= 0.0 && th <= kPi;
    aod_err = std::max(aod_err, std::abs(std::cos(th) - (rk.x() - r0.x()) / (r0 - rk).norm()));
  }
  s.check("AoD lies in [0, pi] and reproduces the direction cosine", in_range && aod_err <= 1e-14,
          "max cosine error " + fmt(aod_err));

  bool threw = false;
  try {
    (void)aod_from_geometry(Position3D(1, 2, 0), Position3D(1, 2, 0));
  } catch (const CoincidentPointsError&) {
    threw = true;
  }
  s.check("coincident UAV and user are rejected", threw);

  const SystemParams p = SystemParams::defaults(1, 4);
  const Position3D r0(0, 0, 100), rk(30, 40, 0);
  const double expected = std::sqrt(p.rho_const() * p.n_antennas) / (r0 - rk).norm();
  const double got = channel_vector(r0, rk, aod_from_geometry(r0, rk), p).norm();
  s.check("channel norm follows free-space path loss", std::abs(got - expected) <= 1e-12 * expected);
  return s.take();
}

std::vector<CheckResult> uncertainty_suite(const VerifyOptions& o) {
  Suite s("uncertainty");
  Rng rng(o.seed + 1);
  std::uniform_real_distribution<double> coord(-300.0, 300.0), rad(0.0, 50.0);

  bool bounded = true;
  double worst_gap = 0.0;
  bool attained = true;
  for (int i = 0; i < o.instances; ++i) {
    const AodUncertainty aod{coord(rng) > 0 ? 1.0 : 2.0, rad(rng) / 100.0};
    const LocationUncertainty loc{Position2D(coord(rng), coord(rng)), rad(rng)};
    for (int j = 0; j < 50; ++j) {
      const auto t = sample_realization(rng, aod, loc);
      bounded = bounded && std::abs(t.delta_theta) <= aod.alpha && t.delta_r.norm() <= loc.radius * (1 + 1e-12);
    }
    const Position2D uav(coord(rng), coord(rng));
    const double wc = worst_case_distance_sq(uav, loc, 100.0);
    for (int j = 0; j < 200; ++j) {
      const Position2D p = loc.center + sample_uniform_disk(rng, loc.radius);
      worst_gap = std::min(worst_gap, wc - ((uav - p).squaredNorm() + 1e4));
    }
    const Position2D far = worst_case_location(uav, loc);
    attained = attained && std::abs((uav - far).squaredNorm() + 1e4 - wc) <= 1e-9 * wc &&
               (far - loc.center).norm() <= loc.radius * (1 + 1e-12);
  }
  s.check("sampled realizations stay inside the uncertainty sets", bounded);
  s.check("worst-case distance bounds every sampled location", worst_gap >= 0.0, "min slack " + fmt(worst_gap));
  s.check("worst-case location attains the bound on the disk boundary", attained);

  // With no uncertainty every oracle collapses to the realized SINR.
  const SystemParams p = SystemParams::defaults(2, 4);
  Scenario sc;
  sc.uav_initial = Position3D(0, 0, 100);
  sc.aod = {{1.0, 0.0}, {2.0, 0.0}};
  sc.location = {{Position2D(-60, 10), 0.0}, {Position2D(80, -20), 0.0}};
  sc.truth.resize(2);
  const std::vector<Eigen::MatrixXcd> w = {random_psd(rng, 4, 1) * 1e-3, random_psd(rng, 4, 1) * 1e-3};
  const auto real = realized_sinr(w, Position2D(5, 5), sc, p);
  const auto lin = worst_case_sinr_oracle(w, Position2D(5, 5), sc, p, AarModel::linearized, {5, 8});
  const auto nl = worst_case_sinr_oracle(w, Position2D(5, 5), sc, p, AarModel::nonlinear, {5, 8});
  double diff = 0.0;
  for (int k = 0; k < 2; ++k)
    diff = std::max({diff, std::abs(lin[k] - real[k]) / real[k], std::abs(nl[k] - real[k]) / real[k]});
  s.check("oracles agree with the realized SINR without uncertainty", diff <= 1e-12, "max rel diff " + fmt(diff));
  return s.take();
}

std::vector<CheckResult> robust_lmi_suite(const VerifyOptions& o) {
  Suite s("robust-lmi");
  const auto stats = s_procedure_sampling(o.seed + 2, std::max(o.instances, 10));
  s.check("boundary instances are LMI feasible", stats.lmi_infeasible == 0,
          std::to_string(stats.lmi_infeasible) + " infeasible of " + std::to_string(stats.instances));
  s.check("S-procedure sampling finds no violation", stats.violations == 0,
          std::to_string(stats.violations) + " violations over " + std::to_string(stats.instances) + " instances");

  // Degenerate sets collapse to 1x1 blocks without multipliers.
  const auto t = taylor_terms<double>(1.0, 4, 0.5);
  const std::vector<HermitianAffine> cov = {HermitianAffine::full(0, 4)};
  const auto c2a = build_c2a_lmi(0, cov, 16, std::nullopt, t, 0.0, 10.0);
  const auto c2b = build_c2b_lmi(0, {0, 1, 2, std::nullopt, 3}, {Position2D::Zero(), 0.0}, 1.0);
  s.check("zero-radius sets give scalar constraints",
          c2a.real_block().dimension() == 1 && c2b.main.dimension() == 1);
  bool threw = false;
  try {
    (void)build_c2a_lmi(0, cov, 16, 17, t, 0.0, 10.0);
  } catch (const std::invalid_argument&) {
    threw = true;
  }
  s.check("multiplier with zero radius is rejected", threw);
  return s.take();
}

std::vector<CheckResult> conic_suite(const VerifyOptions& o) {
  Suite s("conic");
  const double embed = embedding_roundtrip_error(o.seed + 3);
  s.check("Hermitian real embedding round trip", embed <= 1e-10, "max error " + fmt(embed));

  // minimize x0 + x1 subject to [[x0, 1], [1, x1]] >= 0: optimum 2 at (1, 1).
  LmiProgram p;
  p.n_vars = 2;
  p.cost = Eigen::Vector2d(1, 1);
  RealLmiBlock b("pair", 2);
  b.constant << 0, 1, 1, 0;
  b.add(0, (Eigen::MatrixXd(2, 2) << 1, 0, 0, 0).finished());
  b.add(1, (Eigen::MatrixXd(2, 2) << 0, 0, 0, 1).finished());
  p.blocks = {b};
  const auto r = solve_lmi(p);
  const bool ok = r.status == SolveStatus::optimal && std::abs(r.primal_objective - 2.0) <= 1e-7 &&
                  (r.x - Eigen::Vector2d(1, 1)).norm() <= 1e-4;
  s.check("2x2 SDP reaches its known optimum", ok, "objective " + fmt(r.primal_objective));
  s.check("duality gap closes on the 2x2 SDP", r.relative_gap <= 1e-7, "gap " + fmt(r.relative_gap));

  // x >= 1 and -x >= 0 has no solution.
  LmiProgram q;
  q.n_vars = 1;
  q.cost = Eigen::VectorXd::Ones(1);
  RealLmiBlock lo("lower", 1), hi("upper", 1);
  lo.constant(0, 0) = -1;
  lo.add(0, Eigen::MatrixXd::Ones(1, 1));
  hi.add(0, -Eigen::MatrixXd::Ones(1, 1));
  q.blocks = {lo, hi};
  s.check("contradictory bounds are certified infeasible", solve_lmi(q).status == SolveStatus::infeasible);

  // Random PSD-constrained trace minimization: the optimum is the constant's
  // smallest eigenvalue with the sign flipped.
  Rng rng(o.seed + 4);
  double worst = 0.0;
  for (int i = 0; i < std::min(o.instances, 10); ++i) {
    const int n = 2 + i % 4;
    const Eigen::MatrixXd c = random_hermitian(rng, n).real();
    LmiProgram t;
    t.n_vars = 1;
    t.cost = Eigen::VectorXd::Ones(1);
    RealLmiBlock blk("shift", n);
    blk.constant = c;
    blk.add(0, Eigen::MatrixXd::Identity(n, n));
    t.blocks = {blk};
    const auto rr = solve_lmi(t);
    const double want = -min_eigenvalue(c);
    worst = std::max(worst, rr.status == SolveStatus::optimal ? std::abs(rr.primal_objective - want) / std::max(1.0, std::abs(want))
                                                                : 1.0);
  }
  s.check("eigenvalue shift programs match the spectrum", worst <= 1e-7, "max error " + fmt(worst));
  return s.take();
}

std::vector<CheckResult> problem_suite(const VerifyOptions& o) {
  Suite s("problem");
  {
    const SystemParams p = SystemParams::defaults(1, 4);
    Scenario sc;
    sc.uav_initial = Position3D(0, 0, p.altitude);
    sc.aod = {{kPi / 2, 0.0}};
    sc.location = {{Position2D::Zero(), 0.0}};
    sc.truth.resize(1);
    const auto sol = solve(assemble(sc, p));
    const double want = single_user_power(p);
    const double err = sol.optimal() ? std::abs(sol.objective - want) / want : 1.0;
    s.check("single user below the UAV matches the closed form", err <= 1e-3, "relative error " + fmt(err));
  }

  ExperimentConfig cfg;
  cfg.seed = o.seed;
  cfg.n_users = 2;
  int solved = 0;
  double worst_ratio = 0.0, worst_gap = 0.0, worst_margin = 0.0, worst_c2b = 0.0;
  for (int i = 0; i < std::min(o.instances, 8); ++i) {
    const SweepPoint pt{i % 2 ? 6 : 4, i % 4 < 2 ? 0.01 : 0.05, i % 3 ? 20.0 : 10.0, 10.0};
    const Scenario sc = generate_scenario(cfg, pt, i);
    const SystemParams p = cfg.system(pt.n_antennas, pt.sinr_db);
    const auto sol = solve(assemble(sc, p));
    if (!sol.optimal()) continue;
    ++solved;
    worst_ratio = std::max(worst_ratio, sol.max_rank_ratio());
    worst_gap = std::max(worst_gap, sol.report.relative_gap);
    const auto lin = worst_case_sinr_oracle(sol, sc, p, AarModel::linearized, {101, 64});
    for (int k = 0; k < p.n_users; ++k) {
      worst_margin = std::min(worst_margin, lin[k] / p.sinr_req[k] - 1.0);
      const double need = p.sinr_req[k] * p.noise_power[k] *
                          worst_case_distance_sq(sol.position, sc.location[k], p.altitude) / p.rho_const();
      worst_c2b = std::min(worst_c2b, sol.slacks.eta[k] / need - 1.0);
    }
  }
  s.check("random instances solve", solved > 0, std::to_string(solved) + " optimal");
  s.check("covariances are rank one", worst_ratio <= kRankTolerance, "max ratio " + fmt(worst_ratio));
  s.check("duality gap within tolerance", worst_gap <= 1e-7, "max gap " + fmt(worst_gap));
  s.check("linearized worst-case SINR meets the target", worst_margin >= -1e-6, "min margin " + fmt(worst_margin));
  s.check("location slack covers the farthest point", worst_c2b >= -1e-6, "min margin " + fmt(worst_c2b));
  return s.take();
}

std::vector<CheckResult> baselines_suite(const VerifyOptions& o) {
  Suite s("baselines");
  Rng rng(o.seed + 5);
  std::uniform_real_distribution<double> angle(0.3, kPi - 0.3);
  double leak = 0.0, align = 0.0;
  for (int i = 0; i < o.instances; ++i) {
    std::vector<Eigen::VectorXcd> a;
    for (int k = 0; k < 3; ++k) a.push_back(steering_vector<double>(angle(rng), 6, 0.5));
    try {
      const auto zf = zf_directions(a);
      for (int k = 0; k < 3; ++k)
        for (int j = 0; j < 3; ++j)
          if (j != k) leak = std::max(leak, std::abs(a[j].dot(zf[k])) / a[j].norm());
    } catch (const RankDeficientError&) {
    }
    const auto mrt = mrt_directions(a);
    for (int k = 0; k < 3; ++k) align = std::max(align, std::abs(std::abs(a[k].dot(mrt[k])) - a[k].norm()));
  }
  s.check("ZF directions null the other users", leak <= 1e-9, "max leakage " + fmt(leak));
  s.check("MRT directions align with the own response", align <= 1e-12, "max error " + fmt(align));

  std::vector<Eigen::VectorXcd> same(2, steering_vector<double>(1.0, 4, 0.5));
  bool threw = false;
  try {
    (void)zf_directions(same);
  } catch (const RankDeficientError&) {
    threw = true;
  }
  s.check("ZF rejects identical responses", threw);

  ExperimentConfig cfg;
  cfg.seed = o.seed;
  cfg.drop_c1 = true;
  cfg.schemes = {Scheme::proposed, Scheme::zf, Scheme::mrt};
  int violations = 0, compared = 0;
  for (int i = 0; i < std::min(o.instances, 6); ++i) {
    const auto recs = run_realization(cfg, {6, 0.05, 20.0, 10.0}, i);
    for (int j = 1; j < 3; ++j) {
      if (!recs[j].succeeded()) continue;
      ++compared;
      if (!recs[0].succeeded() || recs[0].total_power > recs[j].total_power * (1 + 1e-6)) ++violations;
    }
  }
  s.check("proposed never needs more power than ZF or MRT", violations == 0,
          std::to_string(violations) + " violations in " + std::to_string(compared) + " comparisons");
  return s.take();
}

std::vector<CheckResult> experiments_suite(const VerifyOptions& o) {
  Suite s("experiments");
  ExperimentConfig cfg;
  cfg.seed = o.seed;
  const SweepPoint pt{6, 0.05, 20.0, 10.0};

  bool same = true, inside = true;
  for (int i = 0; i < o.instances; ++i) {
    const Scenario a = generate_scenario(cfg, pt, i), b = generate_scenario(cfg, pt, i);
    for (int k = 0; k < a.n_users(); ++k) {
      same = same && a.aod[k].theta_bar == b.aod[k].theta_bar && a.truth[k].delta_r == b.truth[k].delta_r &&
             a.truth[k].delta_theta == b.truth[k].delta_theta;
      inside = inside && std::abs(a.truth[k].delta_theta) <= a.aod[k].alpha &&
               a.truth[k].delta_r.norm() <= a.location[k].radius * (1 + 1e-12) &&
               a.location[k].center.norm() <= cfg.cell_radius * (1 + 1e-12);
    }
  }
  s.check("scenarios are deterministic in (seed, index)", same);
  s.check("estimates lie in the cell and truth inside the uncertainty sets", inside);

  bool exact = true;
  for (int i = 0; i < o.instances; ++i) {
    const Scenario a = generate_scenario(cfg, {6, 0.0, 0.0, 10.0}, i);
    for (int k = 0; k < a.n_users(); ++k)
      exact = exact && a.truth[k].delta_theta == 0.0 && a.truth[k].delta_r.isZero();
  }
  s.check("zero uncertainty leaves estimates exact", exact);

  ExperimentRecord r1, r3;
  r1.status = r3.status = RecordStatus::optimal;
  r1.total_power = 1e-3;
  r3.total_power = 3e-3;
  const std::vector<ExperimentRecord> recs = {r1, r3};
  const auto rows = aggregate(recs);
  const double dbm = rows.size() == 1 && rows[0].mean_power_dbm() ? *rows[0].mean_power_dbm() : 0.0;
  s.check("aggregation averages in linear watts", std::abs(dbm - 10 * std::log10(2.0)) <= 1e-12, fmt(dbm) + " dBm");

  ExperimentConfig rt = cfg;
  rt.rho = {0.01, 0.1};
  rt.schemes = {Scheme::mrt, Scheme::proposed};
  std::istringstream in(format_config(rt));
  s.check("config text round trips", format_config(parse_config(in)) == format_config(rt));
  return s.take();
}

const std::map<std::string, std::function<std::vector<CheckResult>(const VerifyOptions&)>>& registry() {
  static const std::map<std::string, std::function<std::vector<CheckResult>(const VerifyOptions&)>> r = {
      {"geometry", geometry_suite}, {"uncertainty", uncertainty_suite}, {"robust-lmi", robust_lmi_suite},
      {"conic", conic_suite},       {"problem", problem_suite},         {"baselines", baselines_suite},
      {"experiments", experiments_suite}};
  return r;
}

} // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"geometry", "uncertainty", "robust-lmi", "conic",
                                                 "problem",  "baselines",   "experiments"};
  return names;
}

std::vector<CheckResult> run_suite(const std::string& suite, const VerifyOptions& options) {
  const auto it = registry().find(suite);
  if (it == registry().end()) throw std::invalid_argument("unknown suite '" + suite + "'");
  return it->second(options);
}

std::vector<CheckResult> run_invariant_suites(const VerifyOptions& options) {
  std::vector<CheckResult> out;
  for (const auto& name : suite_names()) {
    auto r = run_suite(name, options);
    out.insert(out.end(), r.begin(), r.end());
  }
  return out;
}

double single_user_power(const SystemParams& params) {
  return params.sinr_req.at(0) * params.noise_power.at(0) * params.altitude * params.altitude /
         (params.rho_const() * params.n_antennas);
}

double embedding_roundtrip_error(std::uint64_t seed, int trials) {
  Rng rng(seed);
  double worst = 0.0;
  for (int i = 0; i < trials; ++i) {
    const Eigen::MatrixXcd h = random_hermitian(rng, 1 + i % 8);
    worst = std::max(worst, (derealify(realify(h)) - h).norm() / h.norm());
  }
  return worst;
}

std::vector<double> taylor_fd_errors(double theta_bar, int n_antennas, double spacing_ratio,
                                     const std::vector<double>& steps) {
  const auto t = taylor_terms<double>(theta_bar, n_antennas, spacing_ratio);
  std::vector<double> out;
  for (double h : steps) {
    const auto a = steering_vector<double>(theta_bar + h, n_antennas, spacing_ratio);
    out.push_back(((a - t.a0) / h - t.a1).norm());
  }
  return out;
}

SProcedureStats s_procedure_sampling(std::uint64_t seed, int instances) {
  Rng rng(seed);
  std::uniform_real_distribution<double> angle(0.2, kPi - 0.2), unit(0.0, 1.0);
  SProcedureStats stats;
  for (int i = 0; i < instances; ++i) {
    SProcedureReport rep;
    if (i % 2 == 0) {
      // C2a: two users, N = 4, random covariances, eta pushed to its largest feasible value.
      const int n = 4;
      const auto t = taylor_terms<double>(angle(rng), n, 0.5);
      const std::vector<HermitianAffine> cov = {HermitianAffine::full(0, n), HermitianAffine::full(n * n, n)};
      const int eta = 2 * n * n, delta = eta + 1;
      std::vector<double> x(delta + 1, 0.0);
      write_coordinates(cov[0], random_psd(rng, n, 1) * 10.0, x);
      write_coordinates(cov[1], random_psd(rng, n, 1), x);
      const double alpha = 0.02 + 0.3 * unit(rng);
      const auto c = build_c2a_lmi(0, cov, eta, delta, t, alpha, 1.0 + 9.0 * unit(rng), 1.0,
                                   i % 4 == 0 ? C2aForm::real : C2aForm::hermitian);
      const RealLmiBlock blk = c.real_block();
      const Eigen::MatrixXd q = c.quadratic.payload.evaluate(x);
      x[delta] = std::max(0.0, -q(0, 0)) + (0.1 + unit(rng)) * std::max(1.0, q.cwiseAbs().maxCoeff());
      const double big = 1e3 * std::max(1.0, q.cwiseAbs().maxCoeff()) * (1 + alpha * alpha * x[delta]);
      boundary_value(blk, x, eta, -big, big);
      rep = verify_s_procedure(blk, c.quadratic, x);
    } else {
      // C2b: random position and multiplier, eta pulled down to its smallest feasible value.
      const LocationUncertainty loc{Position2D(2 * unit(rng) - 1, 2 * unit(rng) - 1), 0.05 + 0.5 * unit(rng)};
      const auto c = build_c2b_lmi(0, {0, 1, 2, 3, 4}, loc, 1.0);
      std::vector<double> x = {2 * unit(rng) - 1, 2 * unit(rng) - 1, 0.0, 1.0 + 0.1 + 4 * unit(rng), 0.0};
      x[4] = (Position2D(x[0], x[1]) - loc.center).squaredNorm();
      boundary_value(c.main, x, 2, 1e3, -1e3);
      rep = verify_s_procedure(c.main, c.quadratic, x);
    }
    ++stats.instances;
    if (!rep.lmi_feasible) ++stats.lmi_infeasible;
    stats.violations += static_cast<int>(rep.violations.size());
  }
  return stats;
}

} // namespace uavbf
