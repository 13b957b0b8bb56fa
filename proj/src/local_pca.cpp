#include "datacurv/local_pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "datacurv/errors.hpp"

namespace datacurv {

CovarianceFromPoint covariance_from_point(const PointCloud& cloud,
                                          std::span<const std::size_t> B,
                                          std::span<const double> p) {
  if (static_cast<int>(p.size()) != cloud.dim()) {
    throw DimensionMismatch("base point dimension differs from cloud");
  }
  if (B.empty()) {
    throw EstimationError(PointStatus::empty_neighborhood,
                          "covariance of an empty neighborhood");
  }
  const int n = cloud.dim();
  CovarianceFromPoint cov;
  cov.base_point = as_vector(p);
  cov.sample_count = B.size();
  cov.matrix = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd d(n);
  for (std::size_t i : B) {
    d = cov.base_point - as_vector(cloud.point(i));
    // Upper triangle only; mirrored below so the result is exactly symmetric.
    for (int r = 0; r < n; ++r) {
      for (int c = r; c < n; ++c) cov.matrix(r, c) += d[r] * d[c];
    }
  }
  const double inv = 1.0 / static_cast<double>(B.size());
  for (int r = 0; r < n; ++r) {
    for (int c = r; c < n; ++c) {
      cov.matrix(r, c) *= inv;
      cov.matrix(c, r) = cov.matrix(r, c);
    }
  }
  return cov;
}

SymmetricEigen eigendecompose(const Eigen::Ref<const Eigen::MatrixXd>& matrix,
                              const JacobiOptions& options) {
  if (matrix.rows() != matrix.cols()) {
    throw InvalidArgument("eigendecompose needs a square matrix");
  }
  const Eigen::Index n = matrix.rows();
  Eigen::MatrixXd a = matrix;
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);

  const double norm = a.norm();
  auto off_diagonal = [&] {
    double sum = 0.0;
    for (Eigen::Index r = 0; r < n; ++r) {
      for (Eigen::Index c = 0; c < n; ++c) {
        if (r != c) sum += a(r, c) * a(r, c);
      }
    }
    return std::sqrt(sum);
  };

  int sweep = 0;
  for (;; ++sweep) {
    if (off_diagonal() <= options.relative_tolerance * norm) break;
    if (sweep == options.max_sweeps) {
      throw EstimationError(PointStatus::eigensolver_failure,
                            "Jacobi iteration did not converge in " +
                                std::to_string(options.max_sweeps) + " sweeps");
    }
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    return a(i, i) > a(j, j);
  });

  SymmetricEigen out;
  out.sweeps = sweep;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    out.vectors.col(k) = v.col(order[k]).normalized();
  }
  return out;
}

Eigen::VectorXd orient(const Eigen::Ref<const Eigen::VectorXd>& u) {
  for (Eigen::Index k = u.size() - 1; k >= 0; --k) {
    if (std::abs(u[k]) > kOrientZeroTolerance) {
      return u[k] < 0.0 ? Eigen::VectorXd(-u) : Eigen::VectorXd(u);
    }
  }
  return u;
}

LocalFrame frame_from_neighborhood(const PointCloud& cloud,
                                   std::span<const std::size_t> B,
                                   std::span<const double> p, double delta) {
  if (!(delta > 0.0)) throw InvalidArgument("delta must be positive");
  const auto cov = covariance_from_point(cloud, B, p);
  const auto eig = eigendecompose(cov);
  const int n = cloud.dim();

  LocalFrame frame;
  frame.delta = delta;
  frame.eigenvalues = eig.values.cwiseMax(0.0);
  frame.dimension = static_cast<int>(
      std::count_if(eig.values.begin(), eig.values.end(),
                    [delta](double lambda) { return lambda >= delta; }));
  if (frame.dimension == 0) {
    throw EstimationError(PointStatus::zero_dimension,
                          "every covariance eigenvalue is below delta");
  }
  if (frame.dimension == n) {
    throw EstimationError(PointStatus::no_normal_direction,
                          "estimated dimension equals ambient dimension");
  }
  frame.vectors.resize(n, frame.dimension + 1);
  for (int k = 0; k <= frame.dimension; ++k) {
    frame.vectors.col(k) = orient(eig.vectors.col(k));
  }
  return frame;
}

LocalFrame compute_dimension(const PointCloud& cloud, const SpatialIndex& index,
                             std::span<const double> p, double eps,
                             double delta) {
  const IndexSet B = index.ball_query(p, eps);
  return frame_from_neighborhood(cloud, B, p, delta);
}

}  // namespace datacurv
