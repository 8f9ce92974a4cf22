#include "uavbf/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <thread>

namespace uavbf {

const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::proposed: return "proposed";
    case Scheme::zf: return "zf";
    case Scheme::mrt: return "mrt";
    case Scheme::nonrobust: return "nonrobust";
  }
  return "unknown";
}

std::optional<Scheme> parse_scheme(const std::string& name) {
  for (Scheme s : {Scheme::proposed, Scheme::zf, Scheme::mrt, Scheme::nonrobust})
    if (name == to_string(s)) return s;
  return std::nullopt;
}

const char* to_string(RecordStatus s) {
  switch (s) {
    case RecordStatus::optimal: return "optimal";
    case RecordStatus::infeasible: return "infeasible";
    case RecordStatus::numerical_failure: return "numerical-failure";
    case RecordStatus::outage: return "outage";
    case RecordStatus::rank_deficient: return "rank-deficient";
  }
  return "unknown";
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& field, const std::string& what) {
    throw std::invalid_argument(field + ": " + what);
  };
  auto finite = [](double v) { return std::isfinite(v); };
  if (realizations < 1) fail("realizations", "must be >= 1");
  if (!(cell_radius > 0.0) || !finite(cell_radius)) fail("cell_radius_m", "must be positive");
  if (n_users < 1) fail("users", "must be >= 1");
  if (!user_positions.empty() && static_cast<int>(user_positions.size()) != n_users)
    fail("user_x_m", "needs one entry per user");
  for (const auto& p : user_positions)
    if (!p.allFinite()) fail("user_x_m", "entries must be finite");
  if (n_antennas.empty()) fail("antennas", "list is empty");
  for (int n : n_antennas)
    if (n < 1) fail("antennas", "every entry must be >= 1");
  if (rho.empty()) fail("rho", "list is empty");
  for (double r : rho) {
    if (!finite(r) || r < 0.0) fail("rho", "entries must be finite and >= 0");
    // alpha = rho |theta_bar| <= rho pi must respect the 0.5 rad cap.
    if (r * std::numbers::pi > 0.5) fail("rho", "entries above 0.5/pi exceed the AoD bound cap");
  }
  if (radius.empty()) fail("radius_m", "list is empty");
  for (double d : radius)
    if (!finite(d) || d < 0.0) fail("radius_m", "entries must be finite and >= 0");
  if (sinr_db.empty()) fail("sinr_db", "list is empty");
  for (double g : sinr_db)
    if (!finite(g)) fail("sinr_db", "entries must be finite");
  if (!finite(gamma_margin_db)) fail("gamma_margin_db", "must be finite");
  if (schemes.empty()) fail("schemes", "list is empty");
  if (oracle.theta_points < 1) fail("oracle_theta_points", "must be >= 1");
  if (oracle.location_directions < 1) fail("oracle_location_directions", "must be >= 1");
  if (!(carrier_freq > 0.0) || !finite(carrier_freq)) fail("carrier_frequency_hz", "must be positive");
  if (!(bandwidth > 0.0) || !finite(bandwidth)) fail("bandwidth_hz", "must be positive");
  if (!(antenna_spacing > 0.0) || !finite(antenna_spacing)) fail("antenna_spacing_m", "must be positive");
  if (!(altitude > 0.0) || !finite(altitude)) fail("altitude_m", "must be positive");
  if (!finite(noise_dbm)) fail("noise_dbm", "must be finite");
  if (!finite(per_antenna_dbm)) fail("per_antenna_dbm", "must be finite");
  if (!(tolerance > 0.0) || !finite(tolerance)) fail("tolerance", "must be positive");
  if (max_iterations < 1) fail("max_iterations", "must be >= 1");
  if (threads < 0) fail("threads", "must be >= 0");
}

SystemParams ExperimentConfig::system(int antennas, double target_db) const {
  SystemParams p = SystemParams::defaults(n_users, antennas);
  p.carrier_freq = carrier_freq;
  p.bandwidth = bandwidth;
  p.antenna_spacing = antenna_spacing;
  p.altitude = altitude;
  p.gamma_margin_db = gamma_margin_db;
  std::fill(p.noise_power.begin(), p.noise_power.end(), dbm_to_watts(noise_dbm));
  std::fill(p.per_antenna_cap.begin(), p.per_antenna_cap.end(), dbm_to_watts(per_antenna_dbm));
  std::fill(p.sinr_req.begin(), p.sinr_req.end(), db_to_linear(target_db));
  return p;
}

SolverOptions ExperimentConfig::solver() const {
  SolverOptions o;
  o.tolerance = tolerance;
  o.max_iterations = max_iterations;
  return o;
}

std::vector<SweepPoint> sweep_points(const ExperimentConfig& config, SweepAxis axis) {
  const SweepPoint base{config.n_antennas.front(), config.rho.front(), config.radius.front(),
                        config.sinr_db.front()};
  std::vector<SweepPoint> out;
  switch (axis) {
    case SweepAxis::rho:
      for (double v : config.rho) out.push_back({base.n_antennas, v, base.radius, base.sinr_db});
      break;
    case SweepAxis::sinr:
      for (double v : config.sinr_db) out.push_back({base.n_antennas, base.rho, base.radius, v});
      break;
    case SweepAxis::radius:
      for (double v : config.radius) out.push_back({base.n_antennas, base.rho, v, base.sinr_db});
      break;
    case SweepAxis::antennas:
      for (int v : config.n_antennas) out.push_back({v, base.rho, base.radius, base.sinr_db});
      break;
  }
  return out;
}

std::mt19937_64 realization_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

Scenario generate_scenario(const ExperimentConfig& config, const SweepPoint& point, std::uint64_t index) {
  auto rng = realization_rng(config.seed, index);
  std::uniform_real_distribution<double> sym(-1.0, 1.0);
  const int n_users = config.n_users;

  // Draws depend on the realization only; the point just rescales the
  // offsets, so the controller's view is the same at every sweep point.
  std::vector<Position2D> estimate(n_users), offset(n_users);
  std::vector<double> jitter(n_users);
  for (int k = 0; k < n_users; ++k) {
    estimate[k] = sample_uniform_disk(rng, config.cell_radius);
    offset[k] = sample_uniform_disk(rng, 1.0);
    jitter[k] = sym(rng);
  }
  if (!config.user_positions.empty()) estimate = config.user_positions;

  Scenario s;
  Position2D centroid = Position2D::Zero();
  std::vector<Position2D> truth(n_users);
  for (int k = 0; k < n_users; ++k) {
    Position2D off = point.radius * offset[k];
    if (config.mismatch) {
      const double r = offset[k].norm();
      off = r > 0.0 ? Position2D(point.radius * (1.0 + r) * offset[k] / r) : Position2D(point.radius * 2.0, 0.0);
    }
    truth[k] = estimate[k] + off;
    centroid += estimate[k] / n_users;
  }
  s.uav_initial = Position3D(centroid.x(), centroid.y(), config.altitude);
  for (int k = 0; k < n_users; ++k) {
    const double theta = aod_from_geometry(s.uav_initial, Position3D(estimate[k].x(), estimate[k].y(), 0.0));
    const double alpha = point.rho * std::abs(theta);
    s.aod.push_back({theta, alpha});
    s.location.push_back({estimate[k], point.radius});
    s.truth.push_back({alpha * jitter[k], truth[k] - estimate[k]});
  }
  return s;
}

namespace {

double min_margin_db(const std::vector<double>& sinr, const SystemParams& params) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < sinr.size(); ++k) m = std::min(m, linear_to_db(sinr[k] / params.sinr_req[k]));
  return m;
}

bool meets(const std::vector<double>& sinr, const SystemParams& params) {
  for (std::size_t k = 0; k < sinr.size(); ++k)
    if (!(sinr[k] >= params.sinr_req[k] * (1.0 - kSinrSlack))) return false;
  return true;
}

RecordStatus from_solver(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return RecordStatus::optimal;
    case SolveStatus::infeasible: return RecordStatus::infeasible;
    case SolveStatus::numerical_failure: return RecordStatus::numerical_failure;
  }
  return RecordStatus::numerical_failure;
}

void evaluate(ExperimentRecord& rec, std::span<const Eigen::MatrixXcd> covariances, const Position2D& uav,
              const Scenario& scenario, const SystemParams& params, const OracleGrid& grid) {
  const auto lin = worst_case_sinr_oracle(covariances, uav, scenario, params, AarModel::linearized, grid);
  const auto nl = worst_case_sinr_oracle(covariances, uav, scenario, params, AarModel::nonlinear, grid);
  const auto real = realized_sinr(covariances, uav, scenario, params);
  rec.linear_margin_db = min_margin_db(lin, params);
  rec.nonlinear_margin_db = min_margin_db(nl, params);
  rec.qos_pass = meets(nl, params);
  rec.realized_pass = meets(real, params);
}

} // namespace

std::vector<ExperimentRecord> run_realization(const ExperimentConfig& config, const SweepPoint& point, int index) {
  const SystemParams params = config.system(point.n_antennas, point.sinr_db);
  const SystemParams design = params.with_sinr_margin(config.gamma_margin_db);
  const Scenario scenario = generate_scenario(config, point, static_cast<std::uint64_t>(index));
  const SolverOptions opts = config.solver();
  const double nan = std::numeric_limits<double>::quiet_NaN();

  std::vector<ExperimentRecord> out;
  for (Scheme scheme : config.schemes) {
    ExperimentRecord rec;
    rec.scheme = scheme;
    rec.point = point;
    rec.realization = index;
    rec.total_power = nan;
    rec.rank_ratio_max = nan;
    rec.linear_margin_db = nan;
    rec.nonlinear_margin_db = nan;
    rec.tau = nan;
    const auto t0 = std::chrono::steady_clock::now();

    auto record_solution = [&](const AllocationSolution& sol) {
      rec.status = from_solver(sol.status);
      if (!sol.optimal()) return;
      rec.total_power = sol.objective;
      rec.rank_ratio_max = sol.max_rank_ratio();
      evaluate(rec, sol.covariances, sol.position, scenario, params, config.oracle);
    };

    switch (scheme) {
      case Scheme::proposed: {
        AssemblyOptions ao;
        ao.include_c1 = !config.drop_c1;
        ao.c2a_form = config.c2a_form;
        record_solution(solve(assemble(scenario, design, ao), opts));
        break;
      }
      case Scheme::zf:
      case Scheme::mrt:
        try {
          const FixedScheme fs = scheme == Scheme::zf ? FixedScheme::zf : FixedScheme::mrt;
          record_solution(solve_fixed_direction(fs, scenario, design, opts, false));
        } catch (const RankDeficientError&) {
          rec.status = RecordStatus::rank_deficient;
        }
        break;
      case Scheme::nonrobust: {
        const auto res = solve_nonrobust(scenario, params, opts, false);
        rec.status = from_solver(res.design.status);
        if (!res.design.optimal()) break;
        rec.rank_ratio_max = res.design.max_rank_ratio();
        if (res.outage) {
          rec.status = RecordStatus::outage;
          break;
        }
        rec.tau = res.tau;
        rec.total_power = res.total_power;
        evaluate(rec, res.covariances, res.design.position, scenario, params, config.oracle);
        break;
      }
    }
    rec.solve_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(rec);
  }
  return out;
}

void canonical_sort(std::vector<ExperimentRecord>& records) {
  std::stable_sort(records.begin(), records.end(), [](const ExperimentRecord& a, const ExperimentRecord& b) {
    if (a.point != b.point) return a.point < b.point;
    if (a.realization != b.realization) return a.realization < b.realization;
    return a.scheme < b.scheme;
  });
}

std::vector<ExperimentRecord> run_sweep(const ExperimentConfig& config, std::span<const SweepPoint> points) {
  config.validate();
  const std::size_t per_point = static_cast<std::size_t>(config.realizations);
  const std::size_t n_tasks = points.size() * per_point;
  std::vector<std::vector<ExperimentRecord>> slots(n_tasks);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n_tasks; i = next++)
      slots[i] = run_realization(config, points[i / per_point], static_cast<int>(i % per_point));
  };
  unsigned n_threads = config.threads > 0 ? static_cast<unsigned>(config.threads) : std::thread::hardware_concurrency();
  n_threads = std::clamp<unsigned>(n_threads, 1, static_cast<unsigned>(std::max<std::size_t>(n_tasks, 1)));
  std::vector<std::jthread> pool;
  for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();

  std::vector<ExperimentRecord> out;
  for (auto& s : slots) out.insert(out.end(), s.begin(), s.end());
  canonical_sort(out);
  return out;
}

std::vector<ExperimentRecord> run_point(const ExperimentConfig& config, const SweepPoint& point) {
  return run_sweep(config, std::span<const SweepPoint>(&point, 1));
}

std::optional<double> SummaryRow::mean_power_dbm() const {
  if (!mean_power) return std::nullopt;
  return watts_to_dbm(*mean_power);
}

std::vector<SummaryRow> aggregate(std::span<const ExperimentRecord> records) {
  if (records.empty()) throw std::invalid_argument("aggregate: no records");
  std::map<std::pair<SweepPoint, Scheme>, SummaryRow> groups;
  std::map<std::pair<SweepPoint, Scheme>, double> power_sum, ratio_sum;
  std::map<std::pair<SweepPoint, Scheme>, int> passes;
  for (const auto& r : records) {
    const auto key = std::make_pair(r.point, r.scheme);
    auto& g = groups[key];
    g.scheme = r.scheme;
    g.point = r.point;
    ++g.records;
    switch (r.status) {
      case RecordStatus::optimal: ++g.succeeded; break;
      case RecordStatus::infeasible: ++g.infeasible; break;
      case RecordStatus::numerical_failure: ++g.numerical_failures; break;
      case RecordStatus::outage: ++g.outages; break;
      case RecordStatus::rank_deficient: ++g.rank_deficient; break;
    }
    if (r.succeeded()) {
      power_sum[key] += r.total_power;
      ratio_sum[key] += r.rank_ratio_max;
      if (r.qos_pass) ++passes[key];
    }
  }
  std::vector<SummaryRow> out;
  for (auto& [key, g] : groups) {
    if (g.succeeded > 0) {
      g.mean_power = power_sum[key] / g.succeeded;
      g.mean_rank_ratio = ratio_sum[key] / g.succeeded;
    }
    g.qos_pass_rate = static_cast<double>(passes[key]) / g.records;
    out.push_back(g);
  }
  return out;
}

namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

} // namespace

std::string csv_header(const CsvOptions& options) {
  std::string h =
      "scheme,n_antennas,rho,radius_m,sinr_db,realization,status,total_power_w,total_power_dbm,rank_ratio_max,"
      "linear_margin_db,nonlinear_margin_db,qos_pass,realized_pass,tau,power_scaling";
  if (options.include_timing) h += ",solve_time_s";
  return h;
}

void write_records_csv(std::ostream& out, std::span<const ExperimentRecord> records, const CsvOptions& options) {
  out << csv_header(options) << '\n';
  for (const auto& r : records) {
    const bool has_power = r.succeeded();
    out << to_string(r.scheme) << ',' << r.point.n_antennas << ',' << fmt(r.point.rho) << ',' << fmt(r.point.radius)
        << ',' << fmt(r.point.sinr_db) << ',' << r.realization << ',' << to_string(r.status) << ','
        << (has_power ? fmt(r.total_power) : "") << ',' << (has_power ? fmt(r.total_power_dbm()) : "") << ','
        << fmt(r.rank_ratio_max) << ',' << fmt(r.linear_margin_db) << ',' << fmt(r.nonlinear_margin_db) << ','
        << (has_power ? (r.qos_pass ? "1" : "0") : "") << ',' << (has_power ? (r.realized_pass ? "1" : "0") : "")
        << ',' << (r.scheme == Scheme::nonrobust ? fmt(r.tau) : "") << ','
        << (r.scheme == Scheme::nonrobust ? "common" : "");
    if (options.include_timing) out << ',' << fmt(r.solve_time);
    out << '\n';
  }
}

void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows) {
  out << "scheme,n_antennas,rho,radius_m,sinr_db,records,succeeded,infeasible,numerical_failures,outages,"
         "rank_deficient,mean_power_w,mean_power_dbm,mean_rank_ratio,qos_pass_rate\n";
  for (const auto& g : rows) {
    out << to_string(g.scheme) << ',' << g.point.n_antennas << ',' << fmt(g.point.rho) << ',' << fmt(g.point.radius)
        << ',' << fmt(g.point.sinr_db) << ',' << g.records << ',' << g.succeeded << ',' << g.infeasible << ','
        << g.numerical_failures << ',' << g.outages << ',' << g.rank_deficient << ','
        << (g.mean_power ? fmt(*g.mean_power) : "") << ',' << (g.mean_power ? fmt(*g.mean_power_dbm()) : "") << ','
        << (g.succeeded ? fmt(g.mean_rank_ratio) : "") << ',' << fmt(g.qos_pass_rate) << '\n';
  }
}

} // namespace uavbf
