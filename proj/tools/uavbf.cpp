// uavbf: robust UAV beamforming and hover-position simulator.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uavbf/config.hpp"
#include "uavbf/experiments.hpp"
#include "uavbf/robust_problem.hpp"
#include "uavbf/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitSolver = 2;

struct CommonArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> realizations;
  std::string out;
  std::string summary;
  std::string schemes;
  bool drop_c1 = false;
  bool mismatch = false;
  std::string oracle_grid;
  std::optional<int> threads;
  bool timing = false;
  bool strict = false;
  std::vector<double> rho, sinr_db, radius;
  std::vector<int> antennas;
  std::optional<int> users;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--config", a.config, "Configuration file (key = value)");
  cmd->add_option("--seed", a.seed, "Master seed for every random draw");
  cmd->add_option("--realizations", a.realizations, "Monte-Carlo realizations per sweep point");
  cmd->add_option("--out", a.out, "Output path (default: stdout)");
  cmd->add_option("--schemes", a.schemes, "Comma list of proposed, zf, mrt, nonrobust");
  cmd->add_flag("--drop-c1", a.drop_c1, "Leave out the per-antenna power caps in every scheme");
  cmd->add_flag("--mismatch", a.mismatch, "Place the true locations outside the uncertainty disks");
  cmd->add_option("--oracle-grid", a.oracle_grid, "Oracle grid as THETA_POINTS,LOCATION_DIRECTIONS");
  cmd->add_option("--rho", a.rho, "Normalized AoD error values")->delimiter(',');
  cmd->add_option("--sinr-db", a.sinr_db, "SINR targets in dB")->delimiter(',');
  cmd->add_option("--radius", a.radius, "Location uncertainty radii in meters")->delimiter(',');
  cmd->add_option("--antennas", a.antennas, "Antenna counts")->delimiter(',');
  cmd->add_option("--users", a.users, "Number of users");
}

void add_sweep_flags(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--threads", a.threads, "Worker threads (0: all cores)");
  cmd->add_option("--summary", a.summary, "Also write per-point summary CSV here");
  cmd->add_flag("--timing", a.timing, "Append a solve_time_s column");
  cmd->add_flag("--strict", a.strict, "Exit 2 when any solve ends in numerical failure");
}

/// Loads the config and applies command-line overrides; throws ConfigError.
uavbf::ExperimentConfig build_config(const CommonArgs& a) {
  using uavbf::ConfigError;
  uavbf::ExperimentConfig c = a.config.empty() ? uavbf::ExperimentConfig{} : uavbf::load_config(a.config);
  if (a.seed) c.seed = *a.seed;
  if (a.realizations) c.realizations = *a.realizations;
  if (a.users) c.n_users = *a.users;
  if (!a.rho.empty()) c.rho = a.rho;
  if (!a.sinr_db.empty()) c.sinr_db = a.sinr_db;
  if (!a.radius.empty()) c.radius = a.radius;
  if (!a.antennas.empty()) c.n_antennas = a.antennas;
  if (a.drop_c1) c.drop_c1 = true;
  if (a.mismatch) c.mismatch = true;
  if (a.threads) c.threads = *a.threads;
  if (!a.schemes.empty()) {
    c.schemes.clear();
    std::istringstream ss(a.schemes);
    std::string name;
    while (std::getline(ss, name, ',')) {
      const auto s = uavbf::parse_scheme(name);
      if (!s) throw ConfigError("--schemes", 0, "schemes", "unknown scheme '" + name + "'");
      c.schemes.push_back(*s);
    }
  }
  if (!a.oracle_grid.empty()) {
    int t = 0, l = 0;
    char tail = 0;
    if (std::sscanf(a.oracle_grid.c_str(), "%d,%d%c", &t, &l, &tail) != 2)
      throw ConfigError("--oracle-grid", 0, "oracle_grid", "expected THETA_POINTS,LOCATION_DIRECTIONS");
    c.oracle = {t, l};
  }
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("command line", 0, "", e.what());
  }
  return c;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty()) return;
    file_.open(path);
    if (!file_) throw uavbf::ConfigError(path, 0, "", "cannot open for writing");
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::string watts(double w) {
  std::ostringstream o;
  o << std::setprecision(6) << w << " W (" << std::fixed << std::setprecision(3) << uavbf::watts_to_dbm(w)
    << " dBm)";
  return o.str();
}

int run_solve(const CommonArgs& a, int realization) {
  using namespace uavbf;
  const ExperimentConfig c = build_config(a);
  const SweepPoint pt{c.n_antennas.front(), c.rho.front(), c.radius.front(), c.sinr_db.front()};
  const Scenario sc = generate_scenario(c, pt, realization);
  const SystemParams params = c.system(pt.n_antennas, pt.sinr_db);
  const SystemParams design = params.with_sinr_margin(c.gamma_margin_db);
  Output out(a.out);
  std::ostream& os = out.stream();

  os << "scenario: K=" << c.n_users << " N_T=" << pt.n_antennas << " rho=" << pt.rho << " D=" << pt.radius
     << " m target=" << pt.sinr_db << " dB (+" << c.gamma_margin_db << " dB margin) seed=" << c.seed
     << " realization=" << realization << '\n';
  os << std::setprecision(6) << "initial UAV position: (" << sc.uav_initial.x() << ", " << sc.uav_initial.y() << ", "
     << sc.uav_initial.z() << ") m\n";
  for (int k = 0; k < sc.n_users(); ++k)
    os << "  user " << k << ": estimate (" << sc.location[k].center.x() << ", " << sc.location[k].center.y()
       << ") m, theta_bar " << sc.aod[k].theta_bar << " rad, alpha " << sc.aod[k].alpha << " rad\n";

  AssemblyOptions ao;
  ao.include_c1 = !c.drop_c1;
  ao.c2a_form = c.c2a_form;
  const RobustProblem problem = assemble(sc, design, ao);
  AllocationSolution sol = solve(problem, c.solver());
  os << "status: " << to_string(sol.status) << " after " << sol.report.iterations << " iterations";
  if (!sol.report.message.empty()) os << " (" << sol.report.message << ')';
  os << '\n';
  os << "residuals: primal " << sol.report.primal_residual << ", dual " << sol.report.dual_residual << ", gap "
     << sol.report.relative_gap << '\n';
  if (sol.status == SolveStatus::numerical_failure) return kExitSolver;
  if (!sol.optimal()) return kExitOk;

  os << "total power: " << watts(sol.objective) << '\n';
  os << "hover position: (" << sol.position.x() << ", " << sol.position.y() << ") m\n";
  extract_beamformers(sol);
  const auto lin = worst_case_sinr_oracle(sol, sc, params, AarModel::linearized, c.oracle);
  const auto nl = worst_case_sinr_oracle(sol, sc, params, AarModel::nonlinear, c.oracle);
  const auto real = realized_sinr(sol.covariances, sol.position, sc, params);
  for (int k = 0; k < sc.n_users(); ++k) {
    os << "  user " << k << ": power " << watts(sol.covariances[k].trace().real()) << ", rank ratio "
       << sol.rank_ratio[k] << '\n';
    os << "    beamformer:";
    for (int n = 0; n < sol.beamformers[k].size(); ++n) os << ' ' << sol.beamformers[k](n);
    os << '\n';
    os << "    SINR margin vs target (dB): worst linearized " << linear_to_db(lin[k] / params.sinr_req[k])
       << ", worst exact " << linear_to_db(nl[k] / params.sinr_req[k]) << ", realized "
       << linear_to_db(real[k] / params.sinr_req[k]) << '\n';
  }
  const auto kkt = kkt_diagnostics(problem, sol);
  if (kkt.available)
    os << "optimality conditions: " << (kkt.passed() ? "pass" : "fail") << " (min xi " << kkt.min_xi << ")\n";
  else
    os << "optimality conditions: " << kkt.notice << '\n';
  for (const auto& w : sol.warnings) os << "warning: " << w << '\n';
  return kExitOk;
}

int run_sweep_cmd(const CommonArgs& a, uavbf::SweepAxis axis) {
  using namespace uavbf;
  const ExperimentConfig c = build_config(a);
  const auto points = sweep_points(c, axis);
  const auto records = run_sweep(c, points);
  {
    Output out(a.out);
    write_records_csv(out.stream(), records, {a.timing});
  }
  if (!a.summary.empty()) {
    Output sum(a.summary);
    write_summary_csv(sum.stream(), aggregate(records));
  }
  int failures = 0;
  for (const auto& r : records) failures += r.status == RecordStatus::numerical_failure;
  if (failures > 0)
    std::cerr << failures << " of " << records.size() << " solves ended in numerical failure\n";
  return a.strict && failures > 0 ? kExitSolver : kExitOk;
}

int run_verify(std::uint64_t seed, int instances, const std::vector<std::string>& suites) {
  uavbf::VerifyOptions o;
  o.seed = seed;
  o.instances = instances;
  int failed = 0, total = 0;
  for (const auto& name : suites.empty() ? uavbf::suite_names() : suites) {
    for (const auto& r : uavbf::run_suite(name, o)) {
      ++total;
      failed += !r.passed;
      std::cout << (r.passed ? "PASS " : "FAIL ") << '[' << r.suite << "] " << r.name;
      if (!r.detail.empty()) std::cout << " (" << r.detail << ')';
      std::cout << '\n';
    }
  }
  std::cout << total - failed << '/' << total << " checks passed\n";
  return failed == 0 ? 0 : 1;
}

int run_dump(const CommonArgs& a, int realization) {
  using namespace uavbf;
  const ExperimentConfig c = build_config(a);
  const SweepPoint pt{c.n_antennas.front(), c.rho.front(), c.radius.front(), c.sinr_db.front()};
  const Scenario sc = generate_scenario(c, pt, realization);
  AssemblyOptions ao;
  ao.include_c1 = !c.drop_c1;
  ao.c2a_form = c.c2a_form;
  Output out(a.out);
  out.stream() << serialize(assemble(sc, c.system(pt.n_antennas, pt.sinr_db).with_sinr_margin(c.gamma_margin_db), ao))
               << '\n';
  return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust beamforming and hover placement for a multi-antenna UAV"};
  app.require_subcommand(1);

  CommonArgs args;
  int realization = 0;

  auto* solve = app.add_subcommand("solve", "Solve one scenario and print the design with diagnostics");
  add_common(solve, args);
  solve->add_option("--realization", realization, "Realization index of the scenario")->check(CLI::NonNegativeNumber);

  struct SweepCmd {
    const char* name;
    const char* help;
    uavbf::SweepAxis axis;
  };
  const SweepCmd sweeps[] = {
      {"sweep-rho", "Sweep the normalized AoD error", uavbf::SweepAxis::rho},
      {"sweep-sinr", "Sweep the SINR target", uavbf::SweepAxis::sinr},
      {"sweep-radius", "Sweep the location uncertainty radius", uavbf::SweepAxis::radius},
      {"sweep-antennas", "Sweep the antenna count", uavbf::SweepAxis::antennas},
  };
  std::vector<std::pair<CLI::App*, uavbf::SweepAxis>> sweep_cmds;
  for (const auto& s : sweeps) {
    auto* cmd = app.add_subcommand(s.name, s.help);
    add_common(cmd, args);
    add_sweep_flags(cmd, args);
    sweep_cmds.emplace_back(cmd, s.axis);
  }

  std::uint64_t verify_seed = 1;
  int verify_instances = 20;
  std::vector<std::string> verify_suites;
  auto* verify = app.add_subcommand("verify", "Run the invariant suites");
  verify->add_option("--seed", verify_seed, "Seed for the randomized checks");
  verify->add_option("--instances", verify_instances, "Randomized cases per property")->check(CLI::PositiveNumber);
  verify->add_option("--suite", verify_suites, "Restrict to these suites")
      ->delimiter(',')
      ->check(CLI::IsMember(uavbf::suite_names()));

  auto* dump = app.add_subcommand("dump-problem", "Print the conic program of one scenario as JSON");
  add_common(dump, args);
  dump->add_option("--realization", realization, "Realization index of the scenario")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*solve) return run_solve(args, realization);
    for (const auto& [cmd, axis] : sweep_cmds)
      if (*cmd) return run_sweep_cmd(args, axis);
    if (*verify) return run_verify(verify_seed, verify_instances, verify_suites);
    if (*dump) return run_dump(args, realization);
  } catch (const uavbf::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSolver;
  }
  return kExitOk;
}
