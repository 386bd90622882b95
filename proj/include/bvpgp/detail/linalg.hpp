#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>

#include "bvpgp/domain.hpp"

namespace bvpgp::detail {

struct CholFailure {
  Index pivot_index;
  double pivot_value;
};

// In-place lower Cholesky of a symmetric matrix (reads the lower triangle).
// Returns the failing pivot on breakdown instead of factoring approximately.
inline std::optional<CholFailure> cholesky_lower_inplace(Matrix& a) {
  const Index n = a.rows();
  for (Index j = 0; j < n; ++j) {
    double diag = a(j, j) - a.row(j).head(j).squaredNorm();
    if (!(diag > 0.0) || !std::isfinite(diag))
      return CholFailure{j, diag};
    diag = std::sqrt(diag);
    a(j, j) = diag;
    for (Index i = j + 1; i < n; ++i) {
      a(i, j) = (a(i, j) - a.row(i).head(j).dot(a.row(j).head(j))) / diag;
    }
    a.row(j).tail(n - j - 1).setZero();
  }
  return std::nullopt;
}

inline double log_det_from_chol(const Matrix& l) {
  return 2.0 * l.diagonal().array().log().sum();
}

// Solve (L L^T) x = b through the factor.
inline Vector chol_solve(const Matrix& l, const Vector& b) {
  Vector x = l.triangularView<Eigen::Lower>().solve(b);
  return l.transpose().triangularView<Eigen::Upper>().solve(x);
}

inline Matrix chol_solve(const Matrix& l, const Matrix& b) {
  Matrix x = l.triangularView<Eigen::Lower>().solve(b);
  return l.transpose().triangularView<Eigen::Upper>().solve(x);
}

// (L L^T)^{-1}, formed through triangular solves on the factor.
inline Matrix chol_inverse(const Matrix& l) {
  Matrix linv = Matrix::Identity(l.rows(), l.cols());
  l.triangularView<Eigen::Lower>().solveInPlace(linv);
  return linv.transpose() * linv;
}

// diag((L L^T)^{-1}) as column squared norms of L^{-1}.
inline Vector chol_inverse_diagonal(const Matrix& l) {
  Matrix linv = Matrix::Identity(l.rows(), l.cols());
  l.triangularView<Eigen::Lower>().solveInPlace(linv);
  return linv.colwise().squaredNorm();
}

}  // namespace bvpgp::detail
