#include "datacurv/adaptive_radius.hpp"

#include "datacurv/errors.hpp"

namespace datacurv {

RadiusAssignment adaptive_radii(const PointCloud& cloud,
                                const SpatialIndex& index, double eta) {
  if (cloud.size() < 2) {
    throw DegenerateCloud("adaptive radii need at least two points");
  }
  RadiusAssignment out;
  out.eta = eta;
  out.diameter = diameter(cloud);
  if (out.diameter == 0.0) {
    throw DegenerateCloud("all points coincide (diameter 0)");
  }
  if (!(eta > 0.0)) throw InvalidArgument("eta must be positive");
  out.radius = kDensityRadiusFraction * out.diameter;
  out.counts.resize(cloud.size());
  out.epsilons.resize(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    out.counts[i] = index.ball_count(cloud.point(i), out.radius);
    out.epsilons[i] = 2.0 * eta / static_cast<double>(out.counts[i]);
  }
  return out;
}

RadiusAssignment adaptive_radii(const PointCloud& cloud, double eta) {
  return adaptive_radii(cloud, SpatialIndex(cloud), eta);
}

}  // namespace datacurv
