#pragma once

#include <complex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace uavbf {

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Affine matrix inequality  constant + sum_v x_v * coeff_v  >= 0 (PSD).
///
/// Scalar is double for real symmetric blocks or std::complex<double> for
/// Hermitian ones. Every coefficient is symmetric/Hermitian of the same size.
template <typename Scalar>
struct LmiBlock {
  struct Term {
    int var;
    DenseMatrix<Scalar> coeff;
  };

  std::string name;
  DenseMatrix<Scalar> constant;
  std::vector<Term> terms;

  LmiBlock() = default;
  LmiBlock(std::string block_name, int dim)
      : name(std::move(block_name)), constant(DenseMatrix<Scalar>::Zero(dim, dim)) {}

  int dimension() const { return static_cast<int>(constant.rows()); }

  /// Accumulates into an existing term for `var` when there is one.
  void add(int var, const DenseMatrix<Scalar>& coeff) {
    for (auto& t : terms)
      if (t.var == var) {
        t.coeff += coeff;
        return;
      }
    terms.push_back({var, coeff});
  }

  DenseMatrix<Scalar> evaluate(std::span<const double> x) const {
    DenseMatrix<Scalar> m = constant;
    for (const auto& t : terms) m += Scalar(x[t.var]) * t.coeff;
    return m;
  }
};

using RealLmiBlock = LmiBlock<double>;
using HermitianLmiBlock = LmiBlock<std::complex<double>>;

/// Hermitian matrix that depends affinely (linearly) on the decision vector:
/// W = sum_v x_v * basis_v.
struct HermitianAffine {
  std::vector<std::pair<int, Eigen::MatrixXcd>> terms;
  int dimension = 0;

  Eigen::MatrixXcd evaluate(std::span<const double> x) const {
    Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(dimension, dimension);
    for (const auto& [v, b] : terms) w += x[v] * b;
    return w;
  }

  /// All N^2 real degrees of freedom of an N x N Hermitian matrix, numbered
  /// from `first_var`: diagonal, then (real, imag) per upper entry.
  static HermitianAffine full(int first_var, int n);
  /// p * d d^H with a single power variable.
  static HermitianAffine rank_one(int var, const Eigen::VectorXcd& direction);
};

/// Real embedding of a Hermitian matrix: X + jY -> [[X, -Y], [Y, X]].
Eigen::MatrixXd realify(const Eigen::MatrixXcd& m);
/// Inverse of realify on the embedded subspace (averages the redundant blocks).
Eigen::MatrixXcd derealify(const Eigen::MatrixXd& m);
/// Hermitian H with <realify(B), M> = Re tr(B H) for every Hermitian B.
Eigen::MatrixXcd embedding_adjoint(const Eigen::MatrixXd& m);

RealLmiBlock realify(const HermitianLmiBlock& block);

/// Scaled upper-triangle packing: off-diagonals multiplied by sqrt(2) so that
/// svec(A).dot(svec(B)) == trace(A B) for symmetric A, B.
Eigen::VectorXd svec(const Eigen::MatrixXd& m);
Eigen::MatrixXd smat(const Eigen::VectorXd& v);

double min_eigenvalue(const Eigen::MatrixXd& m);
double min_eigenvalue(const Eigen::MatrixXcd& m);

} // namespace uavbf
