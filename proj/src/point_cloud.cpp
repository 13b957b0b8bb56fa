#include "datacurv/point_cloud.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "datacurv/errors.hpp"

namespace datacurv {

PointCloud::PointCloud(std::vector<double> coords, int dim)
    : coords_(std::move(coords)), dim_(dim) {
  if (dim_ < 1) throw InvalidArgument("point dimension must be positive");
  if (coords_.empty()) throw InvalidArgument("point cloud is empty");
  if (coords_.size() % static_cast<std::size_t>(dim_) != 0) {
    throw InvalidArgument("coordinate count is not a multiple of the dimension");
  }
  for (std::size_t k = 0; k < coords_.size(); ++k) {
    if (!std::isfinite(coords_[k])) {
      throw InvalidArgument("non-finite coordinate in point " +
                            std::to_string(k / dim_));
    }
  }
}

PointCloud PointCloud::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw InvalidArgument("point cloud is empty");
  const std::size_t dim = rows.front().size();
  std::vector<double> coords;
  coords.reserve(rows.size() * dim);
  for (const auto& row : rows) {
    if (row.size() != dim) throw DimensionMismatch("rows have unequal arity");
    coords.insert(coords.end(), row.begin(), row.end());
  }
  return PointCloud(std::move(coords), static_cast<int>(dim));
}

PointCloud PointCloud::from_matrix(const Eigen::Ref<const RowMatrix>& m) {
  std::vector<double> coords(static_cast<std::size_t>(m.size()));
  Eigen::Map<RowMatrix>(coords.data(), m.rows(), m.cols()) = m;
  return PointCloud(std::move(coords), static_cast<int>(m.cols()));
}

PointCloud PointCloud::permuted(std::span<const std::size_t> order) const {
  std::vector<double> coords;
  coords.reserve(order.size() * dim_);
  for (std::size_t i : order) {
    const auto p = point(i);
    coords.insert(coords.end(), p.begin(), p.end());
  }
  return PointCloud(std::move(coords), dim_);
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    sum += d * d;
  }
  return sum;
}

double diameter(const PointCloud& cloud) {
  double best = 0.0;
  const std::size_t n = cloud.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = cloud.point(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      best = std::max(best, squared_distance(p, cloud.point(j)));
    }
  }
  return std::sqrt(best);
}

}  // namespace datacurv
