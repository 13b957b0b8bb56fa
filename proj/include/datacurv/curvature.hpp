#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "datacurv/adaptive_radius.hpp"
#include "datacurv/errors.hpp"
#include "datacurv/local_pca.hpp"
#include "datacurv/point_cloud.hpp"
#include "datacurv/spatial_index.hpp"

namespace datacurv {

/// Symmetric K x K coefficients of x_{K+1} = 1/2 sum_{i,j} a_ij x_i x_j.
/// Only the upper triangle is stored; a(i, j) == a(j, i) by construction.
class QuadraticForm {
 public:
  explicit QuadraticForm(int dimension);

  int dimension() const noexcept { return dim_; }
  double operator()(int i, int j) const noexcept;
  void set(int i, int j, double value) noexcept;
  Eigen::MatrixXd matrix() const;

  /// f(x) = 1/2 x^T A x.
  double evaluate(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  /// Free unknowns in the order used by fit_quadratic: for i = 0..K-1,
  /// a_ii followed by a_ij, j > i.
  std::span<const double> coefficients() const noexcept { return upper_; }

 private:
  std::size_t slot(int i, int j) const noexcept;

  int dim_;
  std::vector<double> upper_;
};

/// Number of free coefficients K(K+1)/2.
constexpr int quadratic_unknowns(int K) { return K * (K + 1) / 2; }

/// Row per q in B: x_i(q) = (q - p) . u_i for i = 1..K+1.
Eigen::MatrixXd local_coordinates(const PointCloud& cloud,
                                  std::span<const std::size_t> B,
                                  std::span<const double> p,
                                  const LocalFrame& frame);

/// Normal-matrix condition numbers above this raise singular_system.
inline constexpr double kMaxFitCondition = 1e12;

/// Least-squares fit of x_{K+1} = 1/2 sum a_ij x_i x_j over the rows of
/// `rows` (|B| x (K+1)). Unknowns a_ii use basis 1/2 x_i^2 and a_ij (i < j)
/// use x_i x_j; solved through the normal equations. Throws
/// EstimationError(underdetermined_fit) for fewer than K(K+1)/2 rows and
/// EstimationError(singular_system) when the normal matrix is
/// rank-deficient or its condition number exceeds kMaxFitCondition.
QuadraticForm fit_quadratic(const Eigen::Ref<const Eigen::MatrixXd>& rows,
                            int K);

/// Sum of squared residuals E(a) of `form` on `rows`.
double fit_residual(const Eigen::Ref<const Eigen::MatrixXd>& rows,
                    const QuadraticForm& form);

/// det(a_ij) by Gaussian elimination with partial pivoting.
double hessian_determinant(const QuadraticForm& form);

double compute_curvature(const PointCloud& cloud,
                         std::span<const std::size_t> B,
                         std::span<const double> p, const LocalFrame& frame);

struct DimensionCurvature {
  int dimension = 0;
  double curvature = 0.0;
  std::size_t neighbor_count = 0;
  bool sparse_fit = false;  // fewer than 2 * K(K+1)/2 rows went into the fit
};

/// Dimension estimation then curvature on the same ball B(p, eps).
/// Propagates EstimationError from either stage.
DimensionCurvature dimension_and_curvature(const PointCloud& cloud,
                                           const SpatialIndex& index,
                                           std::span<const double> p,
                                           double eps, double delta);

struct PointRecord {
  std::size_t index = 0;
  std::optional<int> dimension;
  std::optional<double> curvature;  // present iff status == ok
  double epsilon = 0.0;
  std::size_t neighbor_count = 0;
  PointStatus status = PointStatus::ok;
  bool sparse_fit = false;
};

/// Evaluates one point with a given radius; never throws EstimationError.
PointRecord evaluate_point(const PointCloud& cloud, const SpatialIndex& index,
                           std::size_t i, double eps, double delta);

struct FieldOptions {
  double delta = 1e-3;
  unsigned threads = 1;  // 0 = hardware concurrency
};

/// Adaptive radii once (eps(p) = 2 eta / N(p)), then dimension and curvature
/// at every point. Output is in index order and does not depend on the
/// thread count. Throws DegenerateCloud for clouds without two distinct
/// points; per-point failures are reported through PointRecord::status.
std::vector<PointRecord> curvature_field(const PointCloud& cloud, double eta,
                                         const FieldOptions& options = {});

/// Same with a prebuilt index and radii.
std::vector<PointRecord> curvature_field(const PointCloud& cloud,
                                         const SpatialIndex& index,
                                         const RadiusAssignment& radii,
                                         const FieldOptions& options = {});

}  // namespace datacurv
