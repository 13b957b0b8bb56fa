#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "datacurv/curvature.hpp"
#include "datacurv/point_cloud.hpp"

namespace datacurv {

/// t: height of the curvature coordinate, d: curvature threshold,
/// d_prime: linkage distance. The curvature coordinate only separates
/// regions when d_prime < t.
struct ClusterParams {
  double scale = 4.0;
  double curvature_threshold = 0.5;
  double link_distance = 2.0;

  static ClusterParams with_default_link(double scale, double threshold) {
    return {scale, threshold, scale / 2.0};
  }
  bool link_below_scale() const noexcept { return link_distance < scale; }
};

/// -t if c < -d, t if c > d, 0 otherwise (|c| == d maps to 0).
double discretize_curvature(double c, double t, double d);

/// p_i -> (p_i, a_i) in R^{n+1}. Throws DimensionMismatch if sizes differ.
PointCloud embed_with_curvature(const PointCloud& cloud,
                                std::span<const double> a);

/// Partition of point indices. Labels are canonical: cluster 0 is the
/// largest, ties broken by the smallest member index.
struct ClusterLabeling {
  std::vector<int> labels;
  std::vector<std::size_t> sizes;  // sizes[label], non-increasing
  /// Distances at which components merged (single-linkage dendrogram
  /// heights below d'), ascending. Only filled on request.
  std::vector<double> merge_heights;

  std::size_t cluster_count() const noexcept { return sizes.size(); }
};

/// Relabels an arbitrary component id vector canonically.
ClusterLabeling canonical_labeling(std::span<const std::size_t> component);

/// Connected components of the graph joining points at distance < d_prime.
ClusterLabeling single_linkage_components(const PointCloud& cloud,
                                          double d_prime,
                                          bool with_merge_heights = false);

struct CurvatureClustering {
  ClusterLabeling labeling;
  std::vector<double> levels;  // a(p) per point
  std::vector<bool> flagged;   // curvature unavailable, a(p) forced to 0
};

/// Discretize, embed into R^{n+1}, single linkage. Points whose record is
/// not ok get a(p) = 0 and are flagged.
CurvatureClustering curvature_clustering(const PointCloud& cloud,
                                         std::span<const PointRecord> records,
                                         const ClusterParams& params,
                                         bool with_merge_heights = false);

}  // namespace datacurv
