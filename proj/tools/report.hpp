#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include <json.hpp>

#include "datacurv/clustering.hpp"
#include "datacurv/curvature.hpp"
#include "datacurv/point_cloud.hpp"

namespace datacurv::cli {

using Json = nlohmann::ordered_json;

/// Uniform bins over [lo, hi]; the maximum lands in the last bin. A single
/// observed value is binned over [v - 0.5, v + 0.5].
struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::size_t> counts;

  double edge(std::size_t k) const;
};

Histogram make_histogram(std::span<const double> values, std::size_t bins);

/// Curvature values of the status-ok records, in index order.
std::vector<double> ok_curvatures(std::span<const PointRecord> records);

double median(std::vector<double> values);

void write_estimate_csv(std::ostream& out, const PointCloud& cloud,
                        std::span<const PointRecord> records);

Json estimate_summary(std::span<const PointRecord> records, std::size_t bins);

void write_cluster_csv(std::ostream& out, const PointCloud& cloud,
                       std::span<const PointRecord> records,
                       const CurvatureClustering& clustering);

}  // namespace datacurv::cli
