#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "uavbf/baselines.hpp"
#include "uavbf/robust_problem.hpp"

namespace uavbf {

enum class Scheme { proposed, zf, mrt, nonrobust };

const char* to_string(Scheme s);
std::optional<Scheme> parse_scheme(const std::string& name);

/// Monte-Carlo protocol plus the physical parameters it runs on (Table I
/// values by default).
struct ExperimentConfig {
  std::uint64_t seed = 1;
  int realizations = 100;
  double cell_radius = 500.0; // m
  int n_users = 3;
  std::vector<int> n_antennas = {6};
  std::vector<double> rho = {0.01, 0.05, 0.10};
  std::vector<double> radius = {20.0};  // D_k, m
  std::vector<double> sinr_db = {10.0}; // Gamma_req, dB
  double gamma_margin_db = 0.3;
  std::vector<Scheme> schemes = {Scheme::proposed, Scheme::zf, Scheme::mrt, Scheme::nonrobust};
  bool drop_c1 = false;
  bool mismatch = false;
  OracleGrid oracle;
  /// Estimated ground positions; drawn per realization when empty.
  std::vector<Position2D> user_positions;

  double carrier_freq = 2.4e9;      // Hz
  double bandwidth = 200e3;         // Hz
  double antenna_spacing = 6.25e-2; // m
  double altitude = 100.0;          // m
  double noise_dbm = -110.0;
  double per_antenna_dbm = 20.0;
  C2aForm c2a_form = C2aForm::real;

  double tolerance = 1e-8;
  int max_iterations = 120;
  int threads = 0; // 0: hardware concurrency

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
  SystemParams system(int n_antennas, double sinr_db) const;
  SolverOptions solver() const;
};

/// One setting of the swept quantities.
struct SweepPoint {
  int n_antennas = 6;
  double rho = 0.0;
  double radius = 0.0;
  double sinr_db = 10.0;

  auto operator<=>(const SweepPoint&) const = default;
};

enum class SweepAxis { rho, sinr, radius, antennas };

/// Points along `axis`, every other quantity at the first entry of its list.
std::vector<SweepPoint> sweep_points(const ExperimentConfig& config, SweepAxis axis);

/// Stream of realization `index` under `seed`; independent of thread count
/// and of the sweep point, so realizations are matched across points.
std::mt19937_64 realization_rng(std::uint64_t seed, std::uint64_t index);

/// Estimated positions uniform on the cell disk (or `user_positions`), true
/// positions within D of them (beyond D with `mismatch`), UAV over the
/// centroid of the estimates.
Scenario generate_scenario(const ExperimentConfig& config, const SweepPoint& point, std::uint64_t index);

enum class RecordStatus { optimal, infeasible, numerical_failure, outage, rank_deficient };

const char* to_string(RecordStatus s);

struct ExperimentRecord {
  Scheme scheme = Scheme::proposed;
  SweepPoint point;
  int realization = 0;
  RecordStatus status = RecordStatus::numerical_failure;
  double total_power = 0.0; // W; NaN unless a power was produced
  double rank_ratio_max = 0.0;
  double linear_margin_db = 0.0;    // worst case, linearized AAR, vs Gamma_req
  double nonlinear_margin_db = 0.0; // worst case, exact AAR, vs Gamma_req
  bool qos_pass = false;            // nonlinear worst case meets Gamma_req
  bool realized_pass = false;       // exact AAR at the hidden realization
  double tau = 1.0;                 // non-robust common scale
  double solve_time = 0.0;          // s

  bool succeeded() const { return status == RecordStatus::optimal; }
  double total_power_dbm() const { return watts_to_dbm(total_power); }
};

/// All schemes on one realization, in the configured scheme order.
std::vector<ExperimentRecord> run_realization(const ExperimentConfig& config, const SweepPoint& point, int index);

/// Every realization of one point, fanned out over a thread pool. Records are
/// returned in canonical order regardless of completion order.
std::vector<ExperimentRecord> run_point(const ExperimentConfig& config, const SweepPoint& point);

std::vector<ExperimentRecord> run_sweep(const ExperimentConfig& config, std::span<const SweepPoint> points);

/// Sorts by sweep point, realization, scheme.
void canonical_sort(std::vector<ExperimentRecord>& records);

struct SummaryRow {
  Scheme scheme = Scheme::proposed;
  SweepPoint point;
  int records = 0;
  int succeeded = 0;
  int infeasible = 0;
  int numerical_failures = 0;
  int outages = 0;
  int rank_deficient = 0;
  std::optional<double> mean_power; // W, linear mean over successes
  double mean_rank_ratio = 0.0;
  double qos_pass_rate = 0.0; // over all records of the group

  std::optional<double> mean_power_dbm() const;
};

/// Per (scheme, point) statistics; rows in canonical order. Throws on empty input.
std::vector<SummaryRow> aggregate(std::span<const ExperimentRecord> records);

struct CsvOptions {
  bool include_timing = false;
};

void write_records_csv(std::ostream& out, std::span<const ExperimentRecord> records, const CsvOptions& options = {});
void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows);
std::string csv_header(const CsvOptions& options = {});

} // namespace uavbf
