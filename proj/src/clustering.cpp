#include "datacurv/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "datacurv/errors.hpp"
#include "datacurv/spatial_index.hpp"
#include "datacurv/union_find.hpp"

namespace datacurv {

double discretize_curvature(double c, double t, double d) {
  if (!(t > 0.0) || !(d > 0.0)) {
    throw InvalidArgument("scale and curvature threshold must be positive");
  }
  if (c < -d) return -t;
  if (c > d) return t;
  return 0.0;
}

PointCloud embed_with_curvature(const PointCloud& cloud,
                                std::span<const double> a) {
  if (a.size() != cloud.size()) {
    throw DimensionMismatch("one curvature level per point is required");
  }
  const int n = cloud.dim();
  std::vector<double> coords;
  coords.reserve(cloud.size() * (n + 1));
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto p = cloud.point(i);
    coords.insert(coords.end(), p.begin(), p.end());
    coords.push_back(a[i]);
  }
  return PointCloud(std::move(coords), n + 1);
}

ClusterLabeling canonical_labeling(std::span<const std::size_t> component) {
  struct Group {
    std::size_t size = 0;
    std::size_t first = 0;
  };
  std::map<std::size_t, Group> groups;
  for (std::size_t i = 0; i < component.size(); ++i) {
    auto [it, inserted] = groups.try_emplace(component[i], Group{0, i});
    ++it->second.size;
  }
  std::vector<std::pair<std::size_t, Group>> ordered(groups.begin(), groups.end());
  std::sort(ordered.begin(), ordered.end(), [](const auto& x, const auto& y) {
    if (x.second.size != y.second.size) return x.second.size > y.second.size;
    return x.second.first < y.second.first;
  });
  std::map<std::size_t, int> label_of;
  ClusterLabeling out;
  for (std::size_t k = 0; k < ordered.size(); ++k) {
    label_of[ordered[k].first] = static_cast<int>(k);
    out.sizes.push_back(ordered[k].second.size);
  }
  out.labels.reserve(component.size());
  for (std::size_t c : component) out.labels.push_back(label_of[c]);
  return out;
}

namespace {

// Prim's algorithm on the complete graph with squared distances; returns the
// MST edges as (squared length, u, v).
struct Edge {
  double length_sq;
  std::size_t u, v;
};

std::vector<Edge> minimum_spanning_tree(const PointCloud& cloud) {
  const std::size_t n = cloud.size();
  std::vector<Edge> tree;
  tree.reserve(n ? n - 1 : 0);
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> from(n, 0);
  std::vector<bool> done(n, false);
  std::size_t current = 0;
  for (std::size_t step = 0; step < n; ++step) {
    done[current] = true;
    if (step > 0) tree.push_back({best[current], from[current], current});
    const auto p = cloud.point(current);
    std::size_t next = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (done[j]) continue;
      const double d = squared_distance(p, cloud.point(j));
      if (d < best[j]) {
        best[j] = d;
        from[j] = current;
      }
      if (next == n || best[j] < best[next]) next = j;
    }
    if (next == n) break;
    current = next;
  }
  return tree;
}

}  // namespace

ClusterLabeling single_linkage_components(const PointCloud& cloud,
                                          double d_prime,
                                          bool with_merge_heights) {
  if (!(d_prime > 0.0)) throw InvalidArgument("link distance must be positive");
  const std::size_t n = cloud.size();
  UnionFind sets(n);
  std::vector<double> heights;
  if (with_merge_heights) {
    const double limit_sq = d_prime * d_prime;
    for (const Edge& e : minimum_spanning_tree(cloud)) {
      if (e.length_sq < limit_sq && sets.unite(e.u, e.v)) {
        heights.push_back(std::sqrt(e.length_sq));
      }
    }
    std::sort(heights.begin(), heights.end());
  } else {
    const SpatialIndex index(cloud);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j : index.ball_query(cloud.point(i), d_prime)) {
        if (j > i) sets.unite(i, j);
      }
    }
  }
  std::vector<std::size_t> component(n);
  for (std::size_t i = 0; i < n; ++i) component[i] = sets.find(i);
  ClusterLabeling out = canonical_labeling(component);
  out.merge_heights = std::move(heights);
  return out;
}

CurvatureClustering curvature_clustering(const PointCloud& cloud,
                                         std::span<const PointRecord> records,
                                         const ClusterParams& params,
                                         bool with_merge_heights) {
  if (records.size() != cloud.size()) {
    throw DimensionMismatch("one record per point is required");
  }
  if (!(params.scale > 0.0) || !(params.curvature_threshold > 0.0) ||
      !(params.link_distance > 0.0)) {
    throw InvalidArgument("clustering parameters must be positive");
  }
  CurvatureClustering out;
  out.levels.resize(cloud.size(), 0.0);
  out.flagged.resize(cloud.size(), false);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const PointRecord& rec = records[i];
    if (rec.status == PointStatus::ok && rec.curvature) {
      out.levels[i] = discretize_curvature(*rec.curvature, params.scale,
                                           params.curvature_threshold);
    } else {
      out.flagged[i] = true;
    }
  }
  const PointCloud lifted = embed_with_curvature(cloud, out.levels);
  out.labeling =
      single_linkage_components(lifted, params.link_distance, with_merge_heights);
  return out;
}

}  // namespace datacurv
