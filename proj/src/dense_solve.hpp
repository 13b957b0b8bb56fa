#pragma once

#include <cmath>
#include <utility>

#include <Eigen/Core>

namespace datacurv::detail {

/// In-place Gaussian elimination with partial pivoting. Returns the
/// determinant of `a`; when `rhs` is non-null and the matrix is nonsingular,
/// it is overwritten with the solution of a x = rhs.
inline double eliminate(Eigen::MatrixXd& a, Eigen::VectorXd* rhs) {
  const Eigen::Index n = a.rows();
  double det = 1.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index pivot = k;
    for (Eigen::Index r = k + 1; r < n; ++r) {
      if (std::abs(a(r, k)) > std::abs(a(pivot, k))) pivot = r;
    }
    if (a(pivot, k) == 0.0) return 0.0;
    if (pivot != k) {
      a.row(k).swap(a.row(pivot));
      if (rhs) std::swap((*rhs)[k], (*rhs)[pivot]);
      det = -det;
    }
    det *= a(k, k);
    for (Eigen::Index r = k + 1; r < n; ++r) {
      const double f = a(r, k) / a(k, k);
      if (f == 0.0) continue;
      a.row(r).tail(n - k) -= f * a.row(k).tail(n - k);
      if (rhs) (*rhs)[r] -= f * (*rhs)[k];
    }
  }
  if (rhs) {
    for (Eigen::Index k = n - 1; k >= 0; --k) {
      double s = (*rhs)[k];
      for (Eigen::Index c = k + 1; c < n; ++c) s -= a(k, c) * (*rhs)[c];
      (*rhs)[k] = s / a(k, k);
    }
  }
  return det;
}

}  // namespace datacurv::detail
