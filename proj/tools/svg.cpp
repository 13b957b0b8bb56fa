#include "svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace datacurv::cli {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMargin = 40.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string rgb(int r, int g, int b) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

void open_svg(std::ostream& out) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth)
      << "\" height=\"" << num(kHeight) << "\" viewBox=\"0 0 " << num(kWidth)
      << ' ' << num(kHeight) << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

struct Projected {
  std::vector<double> x;
  std::vector<double> y;
};

Projected project(const PointCloud& cloud) {
  Projected p;
  p.x.reserve(cloud.size());
  p.y.reserve(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto q = cloud.point(i);
    if (q.size() >= 3) {
      p.x.push_back(q[0] + 0.35 * q[1]);
      p.y.push_back(q[2] + 0.35 * q[1]);
    } else if (q.size() == 2) {
      p.x.push_back(q[0]);
      p.y.push_back(q[1]);
    } else {
      p.x.push_back(q[0]);
      p.y.push_back(0.0);
    }
  }
  return p;
}

template <typename ColorOf>
void write_points(std::ostream& out, const PointCloud& cloud, ColorOf color_of) {
  open_svg(out);
  const Projected p = project(cloud);
  const auto [xmin, xmax] = std::minmax_element(p.x.begin(), p.x.end());
  const auto [ymin, ymax] = std::minmax_element(p.y.begin(), p.y.end());
  const double span = std::max({*xmax - *xmin, *ymax - *ymin, 1e-300});
  const double scale = std::min(kWidth, kHeight) - 2 * kMargin;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const double sx = kMargin + (p.x[i] - *xmin) / span * scale;
    const double sy = kHeight - kMargin - (p.y[i] - *ymin) / span * scale;
    out << "<circle cx=\"" << num(sx) << "\" cy=\"" << num(sy)
        << "\" r=\"1.5\" fill=\"" << color_of(i) << "\"/>\n";
  }
  out << "</svg>\n";
}

}  // namespace

void write_histogram_svg(std::ostream& out, const Histogram& hist,
                         std::string_view title) {
  open_svg(out);
  const std::size_t bins = hist.counts.size();
  const std::size_t peak =
      bins ? *std::max_element(hist.counts.begin(), hist.counts.end()) : 0;
  const double plot_w = kWidth - 2 * kMargin;
  const double plot_h = kHeight - 2 * kMargin;
  for (std::size_t k = 0; k < bins && peak > 0; ++k) {
    const double h = plot_h * static_cast<double>(hist.counts[k]) /
                     static_cast<double>(peak);
    const double w = plot_w / static_cast<double>(bins);
    out << "<rect x=\"" << num(kMargin + w * static_cast<double>(k))
        << "\" y=\"" << num(kHeight - kMargin - h) << "\" width=\"" << num(w)
        << "\" height=\"" << num(h)
        << "\" fill=\"#4a78b5\" stroke=\"white\" stroke-width=\"0.5\"/>\n";
  }
  out << "<text x=\"" << num(kMargin) << "\" y=\"" << num(kHeight - 12)
      << "\" font-size=\"12\">" << num(hist.lo) << "</text>\n"
      << "<text x=\"" << num(kWidth - kMargin) << "\" y=\"" << num(kHeight - 12)
      << "\" font-size=\"12\" text-anchor=\"end\">" << num(hist.hi) << "</text>\n"
      << "<text x=\"" << num(kWidth / 2) << "\" y=\"24\" font-size=\"14\" "
      << "text-anchor=\"middle\">" << title << "</text>\n</svg>\n";
}

void write_curvature_svg(std::ostream& out, const PointCloud& cloud,
                         std::span<const double> values) {
  std::vector<double> mags;
  for (double v : values)
    if (std::isfinite(v)) mags.push_back(std::abs(v));
  double limit = 1.0;
  if (!mags.empty()) {
    const std::size_t q = (mags.size() - 1) * 95 / 100;
    std::nth_element(mags.begin(), mags.begin() + q, mags.end());
    if (mags[q] > 0) limit = mags[q];
  }
  write_points(out, cloud, [&](std::size_t i) {
    const double v = values[i];
    if (!std::isfinite(v)) return rgb(160, 160, 160);
    const double s = std::clamp(v / limit, -1.0, 1.0);
    const int fade = static_cast<int>(std::lround(255 * (1 - std::abs(s))));
    return s >= 0 ? rgb(255, fade, fade) : rgb(fade, fade, 255);
  });
}

void write_label_svg(std::ostream& out, const PointCloud& cloud,
                     std::span<const int> labels) {
  static constexpr std::array<const char*, 10> palette = {
      "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
      "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  write_points(out, cloud, [&](std::size_t i) {
    return std::string(palette[static_cast<std::size_t>(labels[i]) % palette.size()]);
  });
}

}  // namespace datacurv::cli
