#include "uavbf/sdp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <stdexcept>

namespace uavbf {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::numerical_failure: return "numerical-failure";
  }
  return "unknown";
}

int LmiProgram::total_dimension() const {
  int n = 0;
  for (const auto& b : blocks) n += b.dimension();
  return n;
}

Eigen::VectorXd LmiProgram::evaluate_min_eigenvalues(const Eigen::VectorXd& x) const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(blocks.size()));
  const std::span<const double> xs(x.data(), static_cast<std::size_t>(x.size()));
  for (std::size_t b = 0; b < blocks.size(); ++b) out(static_cast<Eigen::Index>(b)) = min_eigenvalue(blocks[b].evaluate(xs));
  return out;
}

namespace {

using std::abs;
using std::pow;
using std::sqrt;

template <typename Scalar>
class InteriorPoint {
 public:
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  InteriorPoint(const LmiProgram& program, const SolverOptions& options) : options_(options), m_(program.n_vars) {
    if (program.cost.size() != m_) throw std::invalid_argument("LmiProgram: cost length differs from n_vars");
    cost_ = program.cost.template cast<Scalar>();
    for (const auto& src : program.blocks) {
      Block b;
      double s = 0.0;
      for (const auto& t : src.terms) {
        if (t.var < 0 || t.var >= m_) throw std::invalid_argument("LmiProgram: block references unknown variable");
        if (t.coeff.rows() != src.dimension() || t.coeff.cols() != src.dimension())
          throw std::invalid_argument("LmiProgram: coefficient size mismatch in block " + src.name);
        s = std::max(s, t.coeff.cwiseAbs().maxCoeff());
      }
      b.scale = s > 0.0 ? s : 1.0;
      b.f0 = (src.constant / b.scale).template cast<Scalar>();
      for (const auto& t : src.terms) {
        if (t.coeff.cwiseAbs().maxCoeff() == 0.0) continue;
        b.vars.push_back(t.var);
        b.coeffs.push_back((t.coeff / b.scale).template cast<Scalar>());
      }
      n_total_ += b.dim();
      blocks_.push_back(std::move(b));
    }
  }

  ConicSolveReport run() {
    initialize();
    ConicSolveReport rep;
    Scalar norm_f0 = 0;
    for (const auto& b : blocks_) norm_f0 += b.f0.squaredNorm();
    norm_f0 = sqrt(norm_f0);
    const Scalar norm_c = cost_.norm();
    const Scalar tol = options_.tolerance;

    int stalled = 0;
    for (int iter = 0;; ++iter) {
      std::vector<Mat> rp(blocks_.size());
      Scalar rp_norm = 0;
      for (std::size_t b = 0; b < blocks_.size(); ++b) {
        rp[b] = evaluate(b, x_) - z_[b];
        rp_norm += rp[b].squaredNorm();
      }
      rp_norm = sqrt(rp_norm);
      const Vec ax = adjoint(x_mat_);
      const Vec rd = cost_ - ax;
      const Scalar pobj = cost_.dot(x_);
      Scalar dobj = 0;
      Scalar xz = 0;
      for (std::size_t b = 0; b < blocks_.size(); ++b) {
        dobj -= inner(blocks_[b].f0, x_mat_[b]);
        xz += inner(x_mat_[b], z_[b]);
      }
      const Scalar mu = xz / n_total_;
      const Scalar pinf = rp_norm / (1 + norm_f0);
      const Scalar dinf = rd.norm() / (1 + norm_c);
      const Scalar relgap = std::max(abs(pobj - dobj), xz) / (1 + abs(pobj) + abs(dobj));

      rep.iterations = iter;
      record(rep, pobj, dobj, pinf, dinf, relgap);
      const Scalar merit = std::max({pinf, dinf, relgap});
      if (merit < best_.merit) best_ = {merit, iter, pobj, dobj, pinf, dinf, relgap, x_, x_mat_, z_};

      if (options_.verbose)
        std::fprintf(stderr, "ipm %3d  pobj % .9e  dobj % .9e  pinf %.2e  dinf %.2e  gap %.2e\n", iter, double(pobj),
                     double(dobj), double(pinf), double(dinf), double(relgap));

      if (merit <= tol) {
        rep.status = SolveStatus::optimal;
        break;
      }
      if (pinf <= tol && relgap <= tol && try_polish(rep)) break;
      // X >= 0 with A^*(X) ~ 0 and F0 . X < 0 certifies that no x satisfies F(x) >= 0.
      if (dobj > 0 && ax.norm() <= Scalar(options_.infeasibility_tolerance) * dobj) {
        rep.status = SolveStatus::infeasible;
        rep.message = "infeasibility certificate found";
        break;
      }
      if (iter >= options_.max_iterations) {
        fail(rep, "iteration limit reached");
        break;
      }

      std::vector<Mat> zinv(blocks_.size());
      bool ok = true;
      for (std::size_t b = 0; b < blocks_.size() && ok; ++b) {
        auto inv = spd_inverse(z_[b]);
        if (inv) zinv[b] = std::move(*inv);
        else ok = false;
      }
      if (!ok) {
        fail(rep, "iterate lost positive definiteness");
        break;
      }

      const Mat schur = schur_complement(zinv);
      Eigen::LLT<Mat> llt(schur);
      std::optional<Eigen::LDLT<Mat>> ldlt;
      if (llt.info() != Eigen::Success) ldlt.emplace(schur);
      auto solve_schur = [&](const Vec& rhs) -> Vec { return ldlt ? Vec(ldlt->solve(rhs)) : Vec(llt.solve(rhs)); };

      // X R_p Z^{-1}, shared by predictor and corrector.
      std::vector<Mat> xrz(blocks_.size());
      for (std::size_t b = 0; b < blocks_.size(); ++b) xrz[b] = x_mat_[b] * rp[b] * zinv[b];

      auto direction = [&](Scalar sigma_mu, const std::vector<Mat>* corr, Vec& dx, std::vector<Mat>& dxm,
                           std::vector<Mat>& dz) {
        Vec rhs = -cost_;
        for (std::size_t b = 0; b < blocks_.size(); ++b) {
          Mat g = -xrz[b];
          if (sigma_mu != 0) g += sigma_mu * zinv[b];
          if (corr) g -= (*corr)[b];
          const auto& blk = blocks_[b];
          for (std::size_t a = 0; a < blk.vars.size(); ++a) rhs(blk.vars[a]) += inner(blk.coeffs[a], g);
        }
        dx = solve_schur(rhs);
        dxm.resize(blocks_.size());
        dz.resize(blocks_.size());
        auto build = [&] {
          for (std::size_t b = 0; b < blocks_.size(); ++b) {
            dz[b] = linear(b, dx) + rp[b];
            Mat d = -x_mat_[b] - x_mat_[b] * dz[b] * zinv[b];
            if (sigma_mu != 0) d += sigma_mu * zinv[b];
            if (corr) d -= (*corr)[b];
            dxm[b] = symmetrize(d);
          }
        };
        build();
        // One step of refinement against the explicitly evaluated A^*(dX).
        dx += solve_schur(adjoint(dxm) - rd);
        build();
        // Cancellation in X dZ Z^{-1} leaves A^*(dX) short of r_d; restore it
        // with a least-norm correction so dual feasibility cannot drift.
        const Vec y = gram_->solve(rd - adjoint(dxm));
        for (std::size_t b = 0; b < blocks_.size(); ++b) dxm[b] += linear(b, y);
      };

      auto steps = [&](const std::vector<Mat>& dxm,
                       const std::vector<Mat>& dz) -> std::optional<std::pair<Scalar, Scalar>> {
        Scalar ap = std::numeric_limits<Scalar>::infinity();
        Scalar ad = std::numeric_limits<Scalar>::infinity();
        for (std::size_t b = 0; b < blocks_.size(); ++b) {
          const auto sp = max_step(x_mat_[b], dxm[b]);
          const auto sd = max_step(z_[b], dz[b]);
          if (!sp || !sd) return std::nullopt;
          ap = std::min(ap, *sp);
          ad = std::min(ad, *sd);
        }
        return std::make_pair(ap, ad);
      };

      // Predictor.
      Vec dx_a;
      std::vector<Mat> dxm_a, dz_a;
      direction(0, nullptr, dx_a, dxm_a, dz_a);
      const auto aff = steps(dxm_a, dz_a);
      if (!aff) {
        fail(rep, "iterate lost positive definiteness");
        break;
      }
      const Scalar ap_a = std::min(Scalar(1), aff->first);
      const Scalar ad_a = std::min(Scalar(1), aff->second);
      Scalar xz_aff = 0;
      for (std::size_t b = 0; b < blocks_.size(); ++b)
        xz_aff += inner(x_mat_[b] + ap_a * dxm_a[b], z_[b] + ad_a * dz_a[b]);
      const Scalar sigma = std::clamp(pow(std::max(xz_aff, Scalar(0)) / n_total_ / mu, Scalar(3)), Scalar(0), Scalar(1));

      // Corrector with the second-order term dX_a dZ_a Z^{-1}.
      std::vector<Mat> corr(blocks_.size());
      for (std::size_t b = 0; b < blocks_.size(); ++b) corr[b] = dxm_a[b] * dz_a[b] * zinv[b];
      Vec dx;
      std::vector<Mat> dxm, dz;
      direction(sigma * mu, &corr, dx, dxm, dz);
      const auto st = steps(dxm, dz);
      if (!st) {
        fail(rep, "iterate lost positive definiteness");
        break;
      }
      const Scalar frac = options_.step_fraction;
      const Scalar ap = std::min(Scalar(1), frac * st->first);
      const Scalar ad = std::min(Scalar(1), frac * st->second);
      if (options_.verbose)
        std::fprintf(stderr, "         sigma %.2e  step %.2e / %.2e\n", double(sigma), double(ap), double(ad));

      for (std::size_t b = 0; b < blocks_.size(); ++b) {
        x_mat_[b] = symmetrize(x_mat_[b] + ap * dxm[b]);
        z_[b] = symmetrize(z_[b] + ad * dz[b]);
      }
      x_ += ad * dx;

      stalled = (ap < 1e-10 && ad < 1e-10) ? stalled + 1 : 0;
      if (stalled >= 3) {
        rep.iterations = iter + 1;
        fail(rep, "step length stalled");
        break;
      }
    }

    rep.x = x_.template cast<double>();
    rep.slacks.resize(blocks_.size());
    rep.duals.resize(blocks_.size());
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      rep.slacks[b] = blocks_[b].scale * evaluate(b, x_).template cast<double>();
      rep.duals[b] = x_mat_[b].template cast<double>() / blocks_[b].scale;
    }
    return rep;
  }

 private:
  struct Block {
    Mat f0;
    std::vector<int> vars;
    std::vector<Mat> coeffs;
    double scale = 1.0; // internal data = original / scale
    int dim() const { return static_cast<int>(f0.rows()); }
  };

  struct Snapshot {
    Scalar merit = std::numeric_limits<Scalar>::infinity();
    int iter = 0;
    Scalar pobj = 0, dobj = 0, pinf = 0, dinf = 0, relgap = 0;
    Vec x;
    std::vector<Mat> x_mat, z;
  };

  static Scalar inner(const Mat& a, const Mat& b) { return a.cwiseProduct(b).sum(); }
  static Mat symmetrize(const Mat& m) { return Scalar(0.5) * (m + m.transpose()); }

  static Scalar min_eig(const Mat& m) {
    if (m.rows() == 1) return m(0, 0);
    return Eigen::SelfAdjointEigenSolver<Mat>(m, Eigen::EigenvaluesOnly).eigenvalues()(0);
  }

  /// Largest t with P + t dP PSD, given P positive definite.
  static std::optional<Scalar> max_step(const Mat& p, const Mat& dp) {
    const Scalar inf = std::numeric_limits<Scalar>::infinity();
    if (p.rows() == 1) {
      if (!(p(0, 0) > 0)) return std::nullopt;
      return dp(0, 0) < 0 ? -p(0, 0) / dp(0, 0) : inf;
    }
    Eigen::LLT<Mat> llt(p);
    if (llt.info() != Eigen::Success) return std::nullopt;
    const Mat half = llt.matrixL().solve(dp);
    const Mat s = llt.matrixL().solve(half.transpose());
    const Scalar lmin = min_eig(symmetrize(s));
    return lmin < 0 ? -1 / lmin : inf;
  }

  static std::optional<Mat> spd_inverse(const Mat& p) {
    if (p.rows() == 1) {
      if (!(p(0, 0) > 0)) return std::nullopt;
      return Mat::Constant(1, 1, 1 / p(0, 0));
    }
    Eigen::LLT<Mat> llt(p);
    if (llt.info() != Eigen::Success) return std::nullopt;
    return symmetrize(llt.solve(Mat::Identity(p.rows(), p.cols())));
  }

  void record(ConicSolveReport& rep, Scalar pobj, Scalar dobj, Scalar pinf, Scalar dinf, Scalar relgap) const {
    rep.primal_objective = double(pobj);
    rep.dual_objective = double(dobj);
    rep.primal_residual = double(pinf);
    rep.dual_residual = double(dinf);
    rep.relative_gap = double(relgap);
  }

  /// Falls back to the most accurate iterate seen and tries to finish it.
  void fail(ConicSolveReport& rep, const char* why) {
    rep.status = SolveStatus::numerical_failure;
    rep.message = why;
    if (!(best_.merit < std::numeric_limits<Scalar>::infinity())) return;
    x_ = best_.x;
    x_mat_ = best_.x_mat;
    z_ = best_.z;
    rep.iterations = best_.iter;
    record(rep, best_.pobj, best_.dobj, best_.pinf, best_.dinf, best_.relgap);
    const Scalar tol = options_.tolerance;
    if (best_.pinf <= tol && best_.relgap <= tol) try_polish(rep);
  }

  /// Removes the remaining dual residual by a least-norm correction of X
  /// restricted to the face where X dominates Z. Accepted only when every
  /// convergence measure then meets the tolerance.
  bool try_polish(ConicSolveReport& rep) {
    std::vector<Mat> basis(blocks_.size());
    std::vector<std::vector<Mat>> proj(blocks_.size());
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      Eigen::SelfAdjointEigenSolver<Mat> es(x_mat_[b]);
      const Mat& v = es.eigenvectors();
      std::vector<Eigen::Index> keep;
      for (Eigen::Index i = 0; i < v.cols(); ++i)
        if (es.eigenvalues()(i) > v.col(i).dot(z_[b] * v.col(i))) keep.push_back(i);
      basis[b] = v(Eigen::all, keep);
      for (const auto& f : blocks_[b].coeffs) proj[b].push_back(basis[b].transpose() * f * basis[b]);
    }
    Mat gram = Mat::Zero(m_, m_);
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      const auto& vars = blocks_[b].vars;
      for (std::size_t a = 0; a < vars.size(); ++a)
        for (std::size_t c = 0; c < vars.size(); ++c) gram(vars[a], vars[c]) += inner(proj[b][a], proj[b][c]);
    }
    const Vec y = gram.completeOrthogonalDecomposition().solve(cost_ - adjoint(x_mat_));
    std::vector<Mat> xm = x_mat_;
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      if (basis[b].cols() == 0) continue;
      Mat s = Mat::Zero(basis[b].cols(), basis[b].cols());
      for (std::size_t a = 0; a < blocks_[b].vars.size(); ++a) s += y(blocks_[b].vars[a]) * proj[b][a];
      xm[b] = symmetrize(xm[b] + basis[b] * s * basis[b].transpose());
      if (min_eig(xm[b]) < 0) return false;
    }

    const Scalar pobj = cost_.dot(x_);
    Scalar dobj = 0, xz = 0, neg = 0, f0 = 0;
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      const Mat z = evaluate(b, x_);
      neg += pow(std::min(Scalar(0), min_eig(z)), 2);
      f0 += blocks_[b].f0.squaredNorm();
      dobj -= inner(blocks_[b].f0, xm[b]);
      xz += inner(xm[b], z);
    }
    const Scalar pinf = sqrt(neg) / (1 + sqrt(f0));
    const Scalar dinf = (cost_ - adjoint(xm)).norm() / (1 + cost_.norm());
    const Scalar relgap = std::max(abs(pobj - dobj), abs(xz)) / (1 + abs(pobj) + abs(dobj));
    if (options_.verbose)
      std::fprintf(stderr, "polish   pobj % .9e  dobj % .9e  pinf %.2e  dinf %.2e  gap %.2e\n", double(pobj),
                   double(dobj), double(pinf), double(dinf), double(relgap));
    if (std::max({pinf, dinf, relgap}) > Scalar(options_.tolerance)) return false;
    x_mat_ = std::move(xm);
    rep.status = SolveStatus::optimal;
    rep.message = "dual residual polished";
    record(rep, pobj, dobj, pinf, dinf, relgap);
    return true;
  }

  void initialize() {
    x_ = Vec::Zero(m_);
    // Scaled-identity start in the spirit of CSDP's default.
    Vec fnorm = Vec::Zero(m_);
    Scalar f0norm = 0;
    Mat g = Mat::Zero(m_, m_);
    for (const auto& b : blocks_) {
      f0norm = std::max(f0norm, b.f0.norm());
      for (std::size_t a = 0; a < b.vars.size(); ++a) {
        fnorm(b.vars[a]) += b.coeffs[a].squaredNorm();
        for (std::size_t c = 0; c < b.vars.size(); ++c) g(b.vars[a], b.vars[c]) += inner(b.coeffs[a], b.coeffs[c]);
      }
    }
    gram_.emplace(g);
    fnorm = fnorm.cwiseSqrt();
    Scalar alpha = 0;
    for (int i = 0; i < m_; ++i) alpha = std::max(alpha, (1 + abs(cost_(i))) / (1 + fnorm(i)));
    alpha *= n_total_;
    const Scalar fmax = fnorm.size() ? fnorm.maxCoeff() : Scalar(0);
    const Scalar beta = (1 + std::max(f0norm, fmax)) / sqrt(Scalar(n_total_));
    const Scalar xi = std::max(10 * alpha, Scalar(1));
    const Scalar zeta = std::max(10 * beta, Scalar(1));
    x_mat_.clear();
    z_.clear();
    for (const auto& b : blocks_) {
      x_mat_.push_back(xi * Mat::Identity(b.dim(), b.dim()));
      z_.push_back(zeta * Mat::Identity(b.dim(), b.dim()));
    }
  }

  Mat evaluate(std::size_t b, const Vec& x) const {
    const auto& blk = blocks_[b];
    Mat m = blk.f0;
    for (std::size_t a = 0; a < blk.vars.size(); ++a) m += x(blk.vars[a]) * blk.coeffs[a];
    return m;
  }

  Mat linear(std::size_t b, const Vec& dx) const {
    const auto& blk = blocks_[b];
    Mat m = Mat::Zero(blk.dim(), blk.dim());
    for (std::size_t a = 0; a < blk.vars.size(); ++a) m += dx(blk.vars[a]) * blk.coeffs[a];
    return m;
  }

  Vec adjoint(const std::vector<Mat>& xm) const {
    Vec out = Vec::Zero(m_);
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      const auto& blk = blocks_[b];
      for (std::size_t a = 0; a < blk.vars.size(); ++a) out(blk.vars[a]) += inner(blk.coeffs[a], xm[b]);
    }
    return out;
  }

  /// M_ij = sum_b tr(F_ib X_b F_jb Z_b^{-1}).
  Mat schur_complement(const std::vector<Mat>& zinv) const {
    Mat m = Mat::Zero(m_, m_);
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      const auto& blk = blocks_[b];
      const std::size_t nv = blk.vars.size();
      if (blk.dim() == 1) {
        const Scalar w = x_mat_[b](0, 0) * zinv[b](0, 0);
        for (std::size_t a = 0; a < nv; ++a)
          for (std::size_t c = 0; c < nv; ++c)
            m(blk.vars[a], blk.vars[c]) += w * blk.coeffs[a](0, 0) * blk.coeffs[c](0, 0);
        continue;
      }
      for (std::size_t a = 0; a < nv; ++a) {
        const Mat g = x_mat_[b] * blk.coeffs[a] * zinv[b];
        for (std::size_t c = a; c < nv; ++c) {
          const Scalar v = inner(blk.coeffs[c], g);
          m(blk.vars[a], blk.vars[c]) += v;
          if (c != a) m(blk.vars[c], blk.vars[a]) += v;
        }
      }
    }
    return symmetrize(m);
  }

  SolverOptions options_;
  int m_;
  int n_total_ = 0;
  Vec cost_;
  std::vector<Block> blocks_;
  std::optional<Eigen::LDLT<Mat>> gram_;
  Snapshot best_;
  Vec x_;
  std::vector<Mat> x_mat_;
  std::vector<Mat> z_;
};

} // namespace

ConicSolveReport solve_lmi(const LmiProgram& program, const SolverOptions& options) {
  if (options.precision == SolverPrecision::extended) return InteriorPoint<long double>(program, options).run();
  auto rep = InteriorPoint<double>(program, options).run();
  if (options.precision == SolverPrecision::automatic && rep.status == SolveStatus::numerical_failure) {
    auto retry = InteriorPoint<long double>(program, options).run();
    if (retry.status != SolveStatus::numerical_failure ||
        std::max({retry.primal_residual, retry.dual_residual, retry.relative_gap}) <
            std::max({rep.primal_residual, rep.dual_residual, rep.relative_gap})) {
      retry.message += " (extended precision)";
      return retry;
    }
  }
  return rep;
}

} // namespace uavbf
