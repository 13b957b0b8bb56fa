#pragma once

#include <iosfwd>
#include <span>
#include <string_view>

#include "datacurv/point_cloud.hpp"
#include "report.hpp"

namespace datacurv::cli {

void write_histogram_svg(std::ostream& out, const Histogram& hist,
                         std::string_view title);

/// Points projected to the page (cabinet projection for n >= 3), colored on
/// a blue-white-red scale by `values`; NaN values are drawn gray.
void write_curvature_svg(std::ostream& out, const PointCloud& cloud,
                         std::span<const double> values);

/// Points colored by cluster label.
void write_label_svg(std::ostream& out, const PointCloud& cloud,
                     std::span<const int> labels);

}  // namespace datacurv::cli
