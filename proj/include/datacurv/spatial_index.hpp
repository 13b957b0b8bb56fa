#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "datacurv/point_cloud.hpp"

namespace datacurv {

/// Exact kd-tree over a PointCloud. Owns a reordered copy of the
/// coordinates, so it stays valid independently of the source cloud and is
/// immutable (and thread-safe to query) after construction.
class SpatialIndex {
 public:
  explicit SpatialIndex(const PointCloud& cloud, std::size_t leaf_size = 16);

  /// Indices i with |p - p_i| < eps (open ball), ascending.
  IndexSet ball_query(std::span<const double> p, double eps) const;

  /// Number of points strictly inside the ball; same predicate as ball_query.
  std::size_t ball_count(std::span<const double> p, double eps) const;

  std::size_t size() const noexcept { return order_.size(); }
  int dim() const noexcept { return dim_; }

 private:
  struct Node {
    std::size_t begin = 0;
    std::size_t end = 0;
    int split_dim = -1;  // -1 for leaves
    double split_value = 0.0;
    std::size_t left = 0;
    std::size_t right = 0;
  };

  std::size_t build(std::size_t begin, std::size_t end);
  void check_query(std::span<const double> p, double eps) const;

  template <typename Visit>
  void search(std::span<const double> p, double eps_sq, Visit&& visit) const;

  int dim_;
  std::size_t leaf_size_;
  std::vector<std::size_t> order_;  // tree slot -> original index
  std::vector<double> coords_;      // coordinates in tree-slot order
  std::vector<double> box_lo_;      // per-node bounding boxes
  std::vector<double> box_hi_;
  std::vector<Node> nodes_;
};

}  // namespace datacurv
