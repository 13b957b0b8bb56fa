#include "datacurv/spatial_index.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "datacurv/errors.hpp"

namespace datacurv {

SpatialIndex::SpatialIndex(const PointCloud& cloud, std::size_t leaf_size)
    : dim_(cloud.dim()), leaf_size_(std::max<std::size_t>(leaf_size, 1)) {
  order_.resize(cloud.size());
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  // Build on the source coordinates, then copy them into slot order.
  coords_.assign(cloud.coords().begin(), cloud.coords().end());
  nodes_.reserve(2 * (cloud.size() / leaf_size_ + 1));
  build(0, order_.size());

  std::vector<double> reordered(coords_.size());
  for (std::size_t s = 0; s < order_.size(); ++s) {
    std::copy_n(coords_.begin() + order_[s] * dim_, dim_,
                reordered.begin() + s * dim_);
  }
  coords_ = std::move(reordered);
}

std::size_t SpatialIndex::build(std::size_t begin, std::size_t end) {
  const std::size_t id = nodes_.size();
  nodes_.push_back({begin, end});
  box_lo_.resize(box_lo_.size() + dim_);
  box_hi_.resize(box_hi_.size() + dim_);

  double* lo = box_lo_.data() + id * dim_;
  double* hi = box_hi_.data() + id * dim_;
  for (int k = 0; k < dim_; ++k) {
    lo[k] = coords_[order_[begin] * dim_ + k];
    hi[k] = lo[k];
  }
  for (std::size_t s = begin + 1; s < end; ++s) {
    for (int k = 0; k < dim_; ++k) {
      const double v = coords_[order_[s] * dim_ + k];
      lo[k] = std::min(lo[k], v);
      hi[k] = std::max(hi[k], v);
    }
  }
  if (end - begin <= leaf_size_) return id;

  int axis = 0;
  for (int k = 1; k < dim_; ++k) {
    if (hi[k] - lo[k] > hi[axis] - lo[axis]) axis = k;
  }
  if (hi[axis] == lo[axis]) return id;  // all points coincide

  const std::size_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid,
                   order_.begin() + end, [&](std::size_t a, std::size_t b) {
                     const double va = coords_[a * dim_ + axis];
                     const double vb = coords_[b * dim_ + axis];
                     return va < vb || (va == vb && a < b);
                   });
  const double split = coords_[order_[mid] * dim_ + axis];
  const std::size_t left = build(begin, mid);
  const std::size_t right = build(mid, end);
  nodes_[id].split_dim = axis;
  nodes_[id].split_value = split;
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

void SpatialIndex::check_query(std::span<const double> p, double eps) const {
  if (static_cast<int>(p.size()) != dim_) {
    throw DimensionMismatch("query point has dimension " +
                            std::to_string(p.size()) + ", index has " +
                            std::to_string(dim_));
  }
  if (!(eps > 0.0)) throw InvalidArgument("ball radius must be positive");
}

template <typename Visit>
void SpatialIndex::search(std::span<const double> p, double eps_sq,
                          Visit&& visit) const {
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    const std::size_t id = stack.back();
    stack.pop_back();
    const double* lo = box_lo_.data() + id * dim_;
    const double* hi = box_hi_.data() + id * dim_;
    double box_sq = 0.0;
    for (int k = 0; k < dim_; ++k) {
      double d = 0.0;
      if (p[k] < lo[k]) d = lo[k] - p[k];
      else if (p[k] > hi[k]) d = p[k] - hi[k];
      box_sq += d * d;
    }
    // Every point in the box is at least this far away.
    if (box_sq >= eps_sq) continue;

    const Node& node = nodes_[id];
    if (node.split_dim < 0) {
      for (std::size_t s = node.begin; s < node.end; ++s) {
        const std::span<const double> q(coords_.data() + s * dim_,
                                        static_cast<std::size_t>(dim_));
        if (squared_distance(p, q) < eps_sq) visit(order_[s]);
      }
    } else {
      stack.push_back(node.right);
      stack.push_back(node.left);
    }
  }
}

IndexSet SpatialIndex::ball_query(std::span<const double> p, double eps) const {
  check_query(p, eps);
  IndexSet out;
  search(p, eps * eps, [&](std::size_t i) { out.push_back(i); });
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t SpatialIndex::ball_count(std::span<const double> p,
                                     double eps) const {
  check_query(p, eps);
  std::size_t count = 0;
  search(p, eps * eps, [&](std::size_t) { ++count; });
  return count;
}

}  // namespace datacurv
