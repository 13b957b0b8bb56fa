#pragma once

#include <cstddef>
#include <vector>

#include "datacurv/point_cloud.hpp"
#include "datacurv/spatial_index.hpp"

namespace datacurv {

/// Density radius as a fraction of the cloud diameter.
inline constexpr double kDensityRadiusFraction = 0.1;

/// Per-point neighborhood radii eps(p) = 2 * eta / N(p), where N(p) counts the
/// points strictly within r = diameter / 10 of p (p included, so N(p) >= 1).
struct RadiusAssignment {
  double eta = 0.0;
  double diameter = 0.0;
  double radius = 0.0;
  std::vector<std::size_t> counts;
  std::vector<double> epsilons;
};

/// Throws DegenerateCloud when N < 2 or all points coincide, InvalidArgument
/// when eta <= 0.
RadiusAssignment adaptive_radii(const PointCloud& cloud,
                                const SpatialIndex& index, double eta);
RadiusAssignment adaptive_radii(const PointCloud& cloud, double eta);

}  // namespace datacurv
