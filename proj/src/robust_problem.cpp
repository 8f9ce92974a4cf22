#include "uavbf/robust_problem.hpp"

#include <algorithm>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace uavbf {

const char* to_string(ConstraintKind k) {
  switch (k) {
    case ConstraintKind::per_antenna_power: return "per_antenna_power";
    case ConstraintKind::c2a: return "c2a";
    case ConstraintKind::c2b: return "c2b";
    case ConstraintKind::epigraph: return "epigraph";
    case ConstraintKind::psd: return "psd";
    case ConstraintKind::sign: return "sign";
  }
  return "unknown";
}

double RobustProblem::eta_unit(int k) const {
  return params.sinr_req[k] * params.noise_power[k] * length_unit * length_unit / params.rho_const();
}

double AllocationSolution::max_rank_ratio() const {
  double r = 0.0;
  for (double v : rank_ratio) r = std::max(r, v);
  return r;
}

namespace {

int add_var(VariableLayout& layout, std::string name) {
  layout.names.push_back(std::move(name));
  return layout.size() - 1;
}

RealLmiBlock scalar_block(std::string name, int var, double coeff = 1.0, double constant = 0.0) {
  RealLmiBlock b(std::move(name), 1);
  b.constant(0, 0) = constant;
  b.add(var, Eigen::MatrixXd::Constant(1, 1, coeff));
  return b;
}

void check_inputs(const Scenario& scenario, const SystemParams& params, const AssemblyOptions& options) {
  params.validate();
  scenario.validate();
  if (scenario.n_users() != params.n_users)
    throw std::invalid_argument("scenario user count does not match SystemParams.n_users");
  if (!(options.power_unit > 0.0)) throw std::invalid_argument("power_unit must be positive");
}

/// Shared tail of both assemblies: position, slacks, C1, C2a, C2b, signs.
RobustProblem assemble_common(const Scenario& scenario, const SystemParams& params, const AssemblyOptions& options,
                              std::span<const Eigen::VectorXcd> directions) {
  check_inputs(scenario, params, options);
  const int n_users = params.n_users;
  const int n_ant = params.n_antennas;

  RobustProblem prob;
  prob.params = params;
  prob.scenario = scenario;
  prob.options = options;
  prob.length_unit = params.altitude > 0.0 ? params.altitude : 1.0;
  prob.directions.assign(directions.begin(), directions.end());
  auto& lay = prob.layout;

  // Covariance variables first, then geometry, then per-user slacks.
  lay.covariance.resize(n_users);
  lay.power.assign(n_users, std::nullopt);
  for (int k = 0; k < n_users; ++k) {
    if (prob.fixed_direction()) {
      const int v = add_var(lay, "p[" + std::to_string(k) + "]");
      lay.power[k] = v;
      lay.covariance[k] = HermitianAffine::rank_one(v, prob.directions[k]);
    } else {
      const int first = lay.size();
      lay.covariance[k] = HermitianAffine::full(first, n_ant);
      const std::string w = "W[" + std::to_string(k) + "]";
      for (int i = 0; i < n_ant; ++i) add_var(lay, w + ".re(" + std::to_string(i) + "," + std::to_string(i) + ")");
      for (int i = 0; i < n_ant; ++i)
        for (int j = i + 1; j < n_ant; ++j) {
          const std::string ij = "(" + std::to_string(i) + "," + std::to_string(j) + ")";
          add_var(lay, w + ".re" + ij);
          add_var(lay, w + ".im" + ij);
        }
    }
  }
  lay.pos_x = add_var(lay, "r0.x");
  lay.pos_y = add_var(lay, "r0.y");
  lay.eta.resize(n_users);
  lay.delta.assign(n_users, std::nullopt);
  lay.mu.assign(n_users, std::nullopt);
  lay.t.resize(n_users);
  for (int k = 0; k < n_users; ++k) {
    const std::string s = "[" + std::to_string(k) + "]";
    lay.eta[k] = add_var(lay, "eta" + s);
    if (scenario.aod[k].alpha > 0.0) lay.delta[k] = add_var(lay, "delta" + s);
    if (scenario.location[k].radius > 0.0) lay.mu[k] = add_var(lay, "mu" + s);
    lay.t[k] = add_var(lay, "t" + s);
  }

  prob.cost = Eigen::VectorXd::Zero(lay.size());
  for (int k = 0; k < n_users; ++k)
    for (const auto& [v, b] : lay.covariance[k].terms) prob.cost(v) += b.trace().real();

  const double pu = options.power_unit;
  const double lu = prob.length_unit;

  if (options.include_c1) {
    for (int i = 0; i < n_ant; ++i) {
      if (std::isinf(params.per_antenna_cap[i])) continue;
      RealLmiBlock c1("c1[" + std::to_string(i) + "]", 1);
      c1.constant(0, 0) = params.per_antenna_cap[i] / pu;
      for (int k = 0; k < n_users; ++k)
        for (const auto& [v, b] : lay.covariance[k].terms)
          if (b(i, i).real() != 0.0) c1.add(v, Eigen::MatrixXd::Constant(1, 1, -b(i, i).real()));
      prob.constraints.push_back({ConstraintKind::per_antenna_power, i, std::move(c1)});
    }
  }

  for (int k = 0; k < n_users; ++k) {
    prob.taylor.push_back(taylor_terms(scenario.aod[k].theta_bar, params));
    auto c2a = build_c2a_lmi(k, lay.covariance, lay.eta[k], lay.delta[k], prob.taylor.back(), scenario.aod[k].alpha,
                             params.sinr_req[k], prob.eta_coeff(k), options.c2a_form);
    prob.c2a_quadratics.push_back(c2a.quadratic);
    prob.constraints.push_back({ConstraintKind::c2a, k, std::move(c2a.block)});
  }

  for (int k = 0; k < n_users; ++k) {
    LocationUncertainty scaled = scenario.location[k];
    scaled.center /= lu;
    scaled.radius /= lu;
    C2bVariables vars{lay.pos_x, lay.pos_y, lay.eta[k], lay.mu[k], lay.t[k]};
    auto c2b = build_c2b_lmi(k, vars, scaled, params.altitude / lu, 1.0);
    prob.c2b_quadratics.push_back(c2b.quadratic);
    prob.constraints.push_back({ConstraintKind::c2b, k, std::move(c2b.main)});
    prob.constraints.push_back({ConstraintKind::epigraph, k, std::move(c2b.epigraph)});
  }

  for (int k = 0; k < n_users; ++k) {
    if (prob.fixed_direction()) {
      prob.constraints.push_back(
          {ConstraintKind::psd, k, scalar_block("psd[" + std::to_string(k) + "]", *lay.power[k])});
    } else {
      HermitianLmiBlock c3("psd[" + std::to_string(k) + "]", n_ant);
      for (const auto& [v, b] : lay.covariance[k].terms) c3.add(v, b);
      prob.constraints.push_back({ConstraintKind::psd, k, std::move(c3)});
    }
  }

  for (int k = 0; k < n_users; ++k) {
    const std::string s = "[" + std::to_string(k) + "]";
    if (lay.delta[k]) prob.constraints.push_back({ConstraintKind::sign, k, scalar_block("delta" + s + ">=0", *lay.delta[k])});
    if (lay.mu[k]) prob.constraints.push_back({ConstraintKind::sign, k, scalar_block("mu" + s + ">=0", *lay.mu[k])});
  }
  return prob;
}

RealLmiBlock as_real(const std::variant<RealLmiBlock, HermitianLmiBlock>& b) {
  if (const auto* r = std::get_if<RealLmiBlock>(&b)) return *r;
  return realify(std::get<HermitianLmiBlock>(b));
}

} // namespace

RobustProblem assemble(const Scenario& scenario, const SystemParams& params, const AssemblyOptions& options) {
  return assemble_common(scenario, params, options, {});
}

RobustProblem assemble_fixed_direction(const Scenario& scenario, const SystemParams& params,
                                       std::span<const Eigen::VectorXcd> directions, const AssemblyOptions& options) {
  if (static_cast<int>(directions.size()) != params.n_users)
    throw std::invalid_argument("one beamforming direction per user required");
  for (const auto& d : directions) {
    if (d.size() != params.n_antennas) throw std::invalid_argument("direction length must equal n_antennas");
    if (std::abs(d.norm() - 1.0) > 1e-9) throw std::invalid_argument("beamforming directions must be unit norm");
  }
  return assemble_common(scenario, params, options, directions);
}

LmiProgram realify(const RobustProblem& problem) {
  LmiProgram prog;
  prog.n_vars = problem.n_vars();
  prog.cost = problem.cost;
  prog.var_names = problem.layout.names;
  prog.blocks.reserve(problem.constraints.size());
  for (const auto& c : problem.constraints) prog.blocks.push_back(as_real(c.block));
  return prog;
}

std::string serialize(const RobustProblem& problem) {
  using nlohmann::json;
  const LmiProgram prog = realify(problem);
  auto packed = [](const Eigen::MatrixXd& m) {
    const Eigen::VectorXd v = svec(m);
    return std::vector<double>(v.data(), v.data() + v.size());
  };

  json j;
  j["format"] = "uavbf-lmi";
  j["version"] = 1;
  j["sense"] = "minimize";
  j["constraint"] = "constant + sum_i x_i * coeff_i is positive semidefinite";
  j["packing"] = "svec-upper-column-major-sqrt2";
  j["units"] = {{"power_w", problem.options.power_unit}, {"length_m", problem.length_unit}};
  j["model"] = problem.fixed_direction() ? "fixed-direction" : "full-covariance";
  j["variables"] = json::array();
  for (int i = 0; i < prog.n_vars; ++i) j["variables"].push_back({{"index", i}, {"name", prog.var_names[i]}});
  j["objective"] = std::vector<double>(prog.cost.data(), prog.cost.data() + prog.cost.size());
  j["blocks"] = json::array();
  for (std::size_t b = 0; b < prog.blocks.size(); ++b) {
    const auto& blk = prog.blocks[b];
    const auto& meta = problem.constraints[b];
    json jb;
    jb["name"] = blk.name;
    jb["kind"] = to_string(meta.kind);
    jb["index"] = meta.index;
    jb["field"] = std::holds_alternative<HermitianLmiBlock>(meta.block) ? "hermitian-embedded" : "real";
    jb["dim"] = blk.dimension();
    jb["constant"] = packed(blk.constant);
    jb["terms"] = json::array();
    for (const auto& t : blk.terms) jb["terms"].push_back({{"var", t.var}, {"coeff", packed(t.coeff)}});
    j["blocks"].push_back(std::move(jb));
  }
  return j.dump(1);
}

AllocationSolution solve(const RobustProblem& problem, const SolverOptions& options) {
  const LmiProgram prog = realify(problem);
  AllocationSolution sol;
  sol.report = solve_lmi(prog, options);
  sol.status = sol.report.status;
  sol.duality_gap = sol.report.relative_gap;
  if (!sol.optimal()) return sol;

  const auto& x = sol.report.x;
  const std::span<const double> xs(x.data(), static_cast<std::size_t>(x.size()));
  const auto& lay = problem.layout;
  const int n_users = problem.params.n_users;
  const double pu = problem.options.power_unit;
  const double lu = problem.length_unit;

  sol.objective = pu * problem.cost.dot(x);
  for (int k = 0; k < n_users; ++k) {
    Eigen::MatrixXcd w = pu * lay.covariance[k].evaluate(xs);
    sol.covariances.push_back(0.5 * (w + w.adjoint()));
    if (lay.power[k]) sol.powers.push_back(pu * x(*lay.power[k]));
  }
  sol.position = lu * Position2D(x(lay.pos_x), x(lay.pos_y));
  for (int k = 0; k < n_users; ++k) {
    sol.slacks.eta.push_back(problem.eta_unit(k) * x(lay.eta[k]));
    sol.slacks.delta.push_back(lay.delta[k] ? pu * x(*lay.delta[k]) : 0.0);
    sol.slacks.mu.push_back(lay.mu[k] ? x(*lay.mu[k]) : 0.0);
    sol.slacks.t.push_back(lu * lu * x(lay.t[k]));
  }

  for (const auto& blk : prog.blocks) {
    const Eigen::MatrixXd m = blk.evaluate(xs);
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    sol.max_violation = std::max(sol.max_violation, std::max(0.0, -min_eigenvalue(m)) / scale);
  }
  extract_beamformers(sol);
  return sol;
}

RankOneFactor principal_factor(const Eigen::MatrixXcd& w) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (w + w.adjoint()));
  const Eigen::Index n = w.rows();
  const double l1 = es.eigenvalues()(n - 1);
  const double l2 = n > 1 ? es.eigenvalues()(n - 2) : 0.0;
  RankOneFactor f;
  if (!(l1 > 0.0)) {
    f.w = Eigen::VectorXcd::Zero(n);
    f.rank_ratio = 0.0;
    return f;
  }
  Eigen::VectorXcd v = es.eigenvectors().col(n - 1);
  const double vmax = v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < n; ++i)
    if (std::abs(v(i)) > 1e-12 * vmax) {
      v *= std::conj(v(i)) / std::abs(v(i));
      v(i) = std::abs(v(i));
      break;
    }
  f.w = std::sqrt(l1) * v;
  f.rank_ratio = std::max(l2, 0.0) / l1;
  return f;
}

std::vector<Eigen::VectorXcd> extract_beamformers(AllocationSolution& solution) {
  if (!solution.optimal()) throw std::logic_error("extract_beamformers: solution is not optimal");
  solution.beamformers.clear();
  solution.rank_ratio.clear();
  for (std::size_t k = 0; k < solution.covariances.size(); ++k) {
    const auto f = principal_factor(solution.covariances[k]);
    solution.beamformers.push_back(f.w);
    solution.rank_ratio.push_back(f.rank_ratio);
    if (f.rank_ratio > kRankTolerance)
      solution.warnings.push_back("user " + std::to_string(k) + ": rank ratio " + std::to_string(f.rank_ratio) +
                                  " exceeds rank-one tolerance");
  }
  return solution.beamformers;
}

bool KktDiagnostics::passed(double tol, double nu_tol) const {
  if (!available) return false;
  if (min_xi < -tol) return false;
  for (const auto& u : users) {
    if (std::abs(u.nu_max - 1.0) > nu_tol) return false;
    if (u.stationarity > tol || u.complementarity > tol) return false;
    if (u.min_eig_y < -tol || u.min_eig_t < -tol) return false;
  }
  return true;
}

KktDiagnostics kkt_diagnostics(const RobustProblem& problem, const AllocationSolution& solution) {
  KktDiagnostics diag;
  if (problem.fixed_direction()) {
    diag.notice = "skipped: fixed-direction model has no covariance multipliers";
    return diag;
  }
  if (!solution.optimal() || solution.report.duals.size() != problem.constraints.size()) {
    diag.notice = "skipped: solver did not return dual multipliers for an optimal point";
    return diag;
  }
  const int n_users = problem.params.n_users;
  const int n_ant = problem.params.n_antennas;
  const auto& duals = solution.report.duals;

  Eigen::MatrixXcd xi = Eigen::MatrixXcd::Zero(n_ant, n_ant);
  std::vector<Eigen::MatrixXcd> t(n_users), y(n_users);
  diag.min_xi = 0.0;
  for (std::size_t b = 0; b < problem.constraints.size(); ++b) {
    const auto& c = problem.constraints[b];
    const Eigen::MatrixXd& d = duals[b];
    switch (c.kind) {
      case ConstraintKind::per_antenna_power:
        xi(c.index, c.index) = d(0, 0);
        diag.min_xi = std::min(diag.min_xi, d(0, 0));
        break;
      case ConstraintKind::c2a:
        if (d.rows() == 1) {
          t[c.index] = Eigen::MatrixXcd::Zero(2, 2);
          t[c.index](1, 1) = d(0, 0);
        } else if (std::holds_alternative<HermitianLmiBlock>(c.block)) {
          t[c.index] = embedding_adjoint(d);
        } else {
          t[c.index] = d.cast<std::complex<double>>();
        }
        break;
      case ConstraintKind::psd: y[c.index] = embedding_adjoint(d); break;
      default: break;
    }
  }

  std::vector<Eigen::MatrixXcd> lifted(n_users);
  for (int k = 0; k < n_users; ++k) {
    const Eigen::MatrixXcd u = problem.taylor[k].basis();
    lifted[k] = u * t[k] * u.adjoint();
  }
  const double pu = problem.options.power_unit;
  for (int k = 0; k < n_users; ++k) {
    Eigen::MatrixXcd delta = lifted[k] - xi;
    for (int r = 0; r < n_users; ++r)
      if (r != k) delta -= problem.params.sinr_req[r] * lifted[r];
    delta = 0.5 * (delta + delta.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(delta, Eigen::EigenvaluesOnly);

    KktDiagnostics::User u;
    u.nu_max = es.eigenvalues()(n_ant - 1);
    const Eigen::MatrixXcd identity = Eigen::MatrixXcd::Identity(n_ant, n_ant);
    u.stationarity = (y[k] - (identity - delta)).norm() / identity.norm();
    const Eigen::MatrixXcd w = solution.covariances[k] / pu;
    const double scale = y[k].norm() * w.norm();
    u.complementarity = scale > 0.0 ? std::abs((y[k] * w).trace().real()) / scale : 0.0;
    u.min_eig_y = min_eigenvalue(Eigen::MatrixXcd(0.5 * (y[k] + y[k].adjoint())));
    u.min_eig_t = min_eigenvalue(Eigen::MatrixXcd(0.5 * (t[k] + t[k].adjoint())));
    diag.users.push_back(u);
  }
  diag.available = true;
  return diag;
}

std::vector<double> worst_case_sinr_oracle(const AllocationSolution& solution, const Scenario& scenario,
                                           const SystemParams& params, AarModel model, const OracleGrid& grid) {
  if (!solution.optimal()) throw std::logic_error("worst_case_sinr_oracle: solution is not optimal");
  return worst_case_sinr_oracle(std::span<const CMatrix<double>>(solution.covariances), solution.position, scenario,
                                params, model, grid);
}

} // namespace uavbf
