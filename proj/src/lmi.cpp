#include "uavbf/lmi.hpp"

#include <cmath>
#include <numbers>

namespace uavbf {

HermitianAffine HermitianAffine::full(int first_var, int n) {
  HermitianAffine w;
  w.dimension = n;
  int v = first_var;
  for (int i = 0; i < n; ++i) {
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(n, n);
    b(i, i) = 1.0;
    w.terms.emplace_back(v++, std::move(b));
  }
  const std::complex<double> j(0.0, 1.0);
  for (int i = 0; i < n; ++i)
    for (int k = i + 1; k < n; ++k) {
      Eigen::MatrixXcd re = Eigen::MatrixXcd::Zero(n, n);
      re(i, k) = 1.0;
      re(k, i) = 1.0;
      w.terms.emplace_back(v++, std::move(re));
      Eigen::MatrixXcd im = Eigen::MatrixXcd::Zero(n, n);
      im(i, k) = j;
      im(k, i) = -j;
      w.terms.emplace_back(v++, std::move(im));
    }
  return w;
}

HermitianAffine HermitianAffine::rank_one(int var, const Eigen::VectorXcd& direction) {
  HermitianAffine w;
  w.dimension = static_cast<int>(direction.size());
  w.terms.emplace_back(var, direction * direction.adjoint());
  return w;
}

Eigen::MatrixXd realify(const Eigen::MatrixXcd& m) {
  const Eigen::Index n = m.rows();
  Eigen::MatrixXd out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = m.real();
  out.bottomRightCorner(n, n) = m.real();
  out.topRightCorner(n, n) = -m.imag();
  out.bottomLeftCorner(n, n) = m.imag();
  return out;
}

Eigen::MatrixXcd derealify(const Eigen::MatrixXd& m) {
  const Eigen::Index n = m.rows() / 2;
  Eigen::MatrixXcd out(n, n);
  out.real() = 0.5 * (m.topLeftCorner(n, n) + m.bottomRightCorner(n, n));
  out.imag() = 0.5 * (m.bottomLeftCorner(n, n) - m.topRightCorner(n, n));
  return out;
}

Eigen::MatrixXcd embedding_adjoint(const Eigen::MatrixXd& m) {
  const Eigen::Index n = m.rows() / 2;
  const Eigen::MatrixXd q = m.topRightCorner(n, n);
  Eigen::MatrixXcd out(n, n);
  out.real() = m.topLeftCorner(n, n) + m.bottomRightCorner(n, n);
  out.imag() = q.transpose() - q;
  return out;
}

RealLmiBlock realify(const HermitianLmiBlock& block) {
  RealLmiBlock out;
  out.name = block.name;
  out.constant = realify(block.constant);
  out.terms.reserve(block.terms.size());
  for (const auto& t : block.terms) out.terms.push_back({t.var, realify(t.coeff)});
  return out;
}

Eigen::VectorXd svec(const Eigen::MatrixXd& m) {
  const Eigen::Index n = m.rows();
  Eigen::VectorXd v(n * (n + 1) / 2);
  Eigen::Index idx = 0;
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i <= j; ++i) v(idx++) = i == j ? m(i, j) : std::numbers::sqrt2 * m(i, j);
  return v;
}

Eigen::MatrixXd smat(const Eigen::VectorXd& v) {
  const auto n = static_cast<Eigen::Index>(std::lround((std::sqrt(8.0 * v.size() + 1.0) - 1.0) / 2.0));
  Eigen::MatrixXd m(n, n);
  Eigen::Index idx = 0;
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i <= j; ++i) {
      const double x = i == j ? v(idx) : v(idx) / std::numbers::sqrt2;
      m(i, j) = x;
      m(j, i) = x;
      ++idx;
    }
  return m;
}

double min_eigenvalue(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() == 1) return m(0, 0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double min_eigenvalue(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

} // namespace uavbf
