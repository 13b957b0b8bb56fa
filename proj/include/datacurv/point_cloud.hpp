#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace datacurv {

using IndexSet = std::vector<std::size_t>;

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Ordered, immutable set of N >= 1 points in R^n with finite coordinates.
/// Index i always refers to the same point.
class PointCloud {
 public:
  /// `coords` holds N*dim values, point-major. Throws InvalidArgument when
  /// the data is empty, not a multiple of `dim`, or not finite.
  PointCloud(std::vector<double> coords, int dim);

  static PointCloud from_rows(const std::vector<std::vector<double>>& rows);
  static PointCloud from_matrix(const Eigen::Ref<const RowMatrix>& m);

  std::size_t size() const noexcept { return coords_.size() / dim_; }
  int dim() const noexcept { return dim_; }

  std::span<const double> point(std::size_t i) const noexcept {
    return {coords_.data() + i * dim_, static_cast<std::size_t>(dim_)};
  }

  std::span<const double> coords() const noexcept { return coords_; }

  Eigen::Map<const RowMatrix> matrix() const noexcept {
    return {coords_.data(), static_cast<Eigen::Index>(size()), dim_};
  }

  /// Points reordered so that result[k] == (*this)[order[k]].
  PointCloud permuted(std::span<const std::size_t> order) const;

  friend bool operator==(const PointCloud&, const PointCloud&) = default;

 private:
  std::vector<double> coords_;
  int dim_;
};

inline Eigen::Map<const Eigen::VectorXd> as_vector(std::span<const double> p) {
  return {p.data(), static_cast<Eigen::Index>(p.size())};
}

double squared_distance(std::span<const double> a, std::span<const double> b);

/// Largest pairwise Euclidean distance, exact O(N^2); 0 for a single point.
double diameter(const PointCloud& cloud);

}  // namespace datacurv
