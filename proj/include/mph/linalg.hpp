// Copyright 2026 The mph Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <limits>

namespace mph {

using complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr complex kI{0.0, 1.0};

inline double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double unitarity_residual(const Matrix& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  return max_abs(u.adjoint() * u - Matrix::Identity(u.rows(), u.cols()));
}

inline double hermiticity_residual(const Matrix& h) {
  if (h.rows() != h.cols()) return std::numeric_limits<double>::infinity();
  return max_abs(h - h.adjoint());
}

inline bool is_unitary(const Matrix& u, double tol = 1e-10) {
  return unitarity_residual(u) < tol;
}

inline bool is_hermitian(const Matrix& h, double tol = 1e-12) {
  return hermiticity_residual(h) < tol;
}

/// exp(-i t h) for Hermitian h, through its eigendecomposition.
inline Matrix expm_hermitian(const Matrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
  const Eigen::VectorXd& w = eig.eigenvalues();
  Vector phases(w.size());
  for (Eigen::Index k = 0; k < w.size(); ++k) phases(k) = std::exp(-kI * (t * w(k)));
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

}  // namespace mph
