#pragma once

#include <cstddef>
#include <span>

#include <Eigen/Core>

#include "datacurv/point_cloud.hpp"
#include "datacurv/spatial_index.hpp"

namespace datacurv {

/// Second-moment matrix of the displacements p - p_i, i in B, taken from the
/// base point p itself (the neighborhood mean is not subtracted):
///   V(p) = (1/|B|) sum_i (p - p_i)(p - p_i)^T,  V(p, v) = v^T V(p) v.
struct CovarianceFromPoint {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd base_point;
  std::size_t sample_count = 0;

  double variance_along(const Eigen::Ref<const Eigen::VectorXd>& v) const {
    return v.dot(matrix * v);
  }
};

/// Throws EstimationError(empty_neighborhood) when B is empty,
/// DimensionMismatch when p has the wrong arity.
CovarianceFromPoint covariance_from_point(const PointCloud& cloud,
                                          std::span<const std::size_t> B,
                                          std::span<const double> p);

struct JacobiOptions {
  int max_sweeps = 100;
  double relative_tolerance = 1e-12;  // off-diagonal Frobenius / |A|_F
};

/// Eigenvalues sorted non-increasing; eigenvectors are the matching unit
/// columns. Equal eigenvalues keep the solver's order.
struct SymmetricEigen {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  int sweeps = 0;
};

/// Cyclic Jacobi rotations. Throws EstimationError(eigensolver_failure) if the
/// off-diagonal mass is still above tolerance after max_sweeps sweeps, and
/// InvalidArgument for non-square input.
SymmetricEigen eigendecompose(const Eigen::Ref<const Eigen::MatrixXd>& matrix,
                              const JacobiOptions& options = {});
inline SymmetricEigen eigendecompose(const CovarianceFromPoint& cov) {
  return eigendecompose(cov.matrix);
}

/// Coordinates with |s| <= kOrientZeroTolerance count as zero in orient().
inline constexpr double kOrientZeroTolerance = 1e-9;

/// Sign convention for eigenvectors: scanning coordinates from the last to
/// the first, the first one that is not (numerically) zero must be positive.
/// Returns u or -u; a vector with no such coordinate is returned unchanged.
Eigen::VectorXd orient(const Eigen::Ref<const Eigen::VectorXd>& u);

/// Result of dimension estimation at one point.
struct LocalFrame {
  int dimension = 0;            // K = #{ lambda_i >= delta }
  Eigen::MatrixXd vectors;      // n x (K+1): u_1..u_K tangent, u_{K+1} normal
  Eigen::VectorXd eigenvalues;  // all n, non-increasing
  double delta = 0.0;

  int ambient_dim() const noexcept {
    return static_cast<int>(eigenvalues.size());
  }
};

/// Builds the frame from an already-selected neighborhood B of p. Throws
/// EstimationError with status empty_neighborhood, eigensolver_failure,
/// zero_dimension (K = 0) or no_normal_direction (K = n).
LocalFrame frame_from_neighborhood(const PointCloud& cloud,
                                   std::span<const std::size_t> B,
                                   std::span<const double> p, double delta);

/// Dimension estimation with B = cloud ∩ open ball(p, eps).
LocalFrame compute_dimension(const PointCloud& cloud, const SpatialIndex& index,
                             std::span<const double> p, double eps,
                             double delta);

}  // namespace datacurv
