#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace riemflow {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Symmetric part of a square matrix expression.
template <typename Derived>
typename Derived::PlainObject symmetrize(const Eigen::MatrixBase<Derived>& m) {
  return typename Derived::PlainObject(0.5 * (m + m.transpose()));
}

/// Applies a scalar function to a symmetric matrix through its
/// eigendecomposition: f(S) = Q f(Lambda) Q^T.
template <typename Derived, typename Func>
typename Derived::PlainObject sym_apply(const Eigen::MatrixBase<Derived>& s, Func f,
                                        const char* what = "sym_apply") {
  using Plain = typename Derived::PlainObject;
  using Scalar = typename Derived::Scalar;
  Plain sym = symmetrize(s);
  Eigen::SelfAdjointEigenSolver<Plain> eig(sym);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error(std::string(what) + ": eigendecomposition did not converge");
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> w = eig.eigenvalues();
  for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = f(w[i]);
  return Plain(eig.eigenvectors() * w.asDiagonal() * eig.eigenvectors().transpose());
}

template <typename Derived>
typename Derived::PlainObject sym_expm(const Eigen::MatrixBase<Derived>& s) {
  return sym_apply(s, [](double x) { return std::exp(x); }, "sym_expm");
}

/// Matrix logarithm of a symmetric positive-definite matrix.
template <typename Derived>
typename Derived::PlainObject sym_logm(const Eigen::MatrixBase<Derived>& s) {
  return sym_apply(
      s,
      [](double x) {
        if (x <= 0.0) throw std::runtime_error("sym_logm: matrix is not positive definite");
        return std::log(x);
      },
      "sym_logm");
}

template <typename Derived>
typename Derived::PlainObject sym_sqrt(const Eigen::MatrixBase<Derived>& s) {
  return sym_apply(
      s,
      [](double x) {
        if (x < 0.0) throw std::runtime_error("sym_sqrt: matrix has a negative eigenvalue");
        return std::sqrt(x);
      },
      "sym_sqrt");
}

template <typename Derived>
typename Derived::PlainObject sym_inv_sqrt(const Eigen::MatrixBase<Derived>& s) {
  return sym_apply(
      s,
      [](double x) {
        if (x <= 0.0) throw std::runtime_error("sym_inv_sqrt: matrix is not positive definite");
        return 1.0 / std::sqrt(x);
      },
      "sym_inv_sqrt");
}

/// Smallest eigenvalue of a symmetric matrix.
template <typename Derived>
double sym_min_eigenvalue(const Eigen::MatrixBase<Derived>& s) {
  Eigen::SelfAdjointEigenSolver<typename Derived::PlainObject> eig(symmetrize(s));
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("sym_min_eigenvalue: eigendecomposition did not converge");
  return eig.eigenvalues().minCoeff();
}

}  // namespace riemflow
