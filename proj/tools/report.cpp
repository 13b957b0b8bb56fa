#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "datacurv/cloud_io.hpp"
#include "datacurv/errors.hpp"

namespace datacurv::cli {

namespace {

constexpr PointStatus kAllStatuses[] = {
    PointStatus::ok,
    PointStatus::empty_neighborhood,
    PointStatus::zero_dimension,
    PointStatus::no_normal_direction,
    PointStatus::underdetermined_fit,
    PointStatus::singular_system,
    PointStatus::eigensolver_failure,
};

void write_coordinate_header(std::ostream& out, int dim) {
  for (int k = 1; k <= dim; ++k) out << ",x" << k;
}

void write_coordinates(std::ostream& out, const PointCloud& cloud,
                       std::size_t i) {
  for (double v : cloud.point(i)) out << ',' << format_double(v);
}

}  // namespace

double Histogram::edge(std::size_t k) const {
  if (k == counts.size()) return hi;
  return lo + (hi - lo) * static_cast<double>(k) /
                  static_cast<double>(counts.size());
}

Histogram make_histogram(std::span<const double> values, std::size_t bins) {
  if (bins == 0) throw InvalidArgument("histogram needs at least one bin");
  Histogram h;
  h.counts.assign(bins, 0);
  if (values.empty()) return h;
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  h.lo = *mn;
  h.hi = *mx;
  if (h.lo == h.hi) {
    h.lo -= 0.5;
    h.hi += 0.5;
  }
  const double width = h.hi - h.lo;
  for (double v : values) {
    auto k = static_cast<std::size_t>((v - h.lo) / width * static_cast<double>(bins));
    h.counts[std::min(k, bins - 1)] += 1;
  }
  return h;
}

std::vector<double> ok_curvatures(std::span<const PointRecord> records) {
  std::vector<double> out;
  for (const auto& r : records)
    if (r.curvature) out.push_back(*r.curvature);
  return out;
}

double median(std::vector<double> values) {
  if (values.empty()) return std::nan("");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  if (values.size() % 2 == 1) return values[mid];
  const double upper = values[mid];
  const double lower = *std::max_element(values.begin(), values.begin() + mid);
  return 0.5 * (lower + upper);
}

void write_estimate_csv(std::ostream& out, const PointCloud& cloud,
                        std::span<const PointRecord> records) {
  out << "idx";
  write_coordinate_header(out, cloud.dim());
  out << ",dim,curvature,epsilon,nbrs,status\n";
  for (const auto& r : records) {
    out << r.index;
    write_coordinates(out, cloud, r.index);
    out << ',';
    if (r.dimension) out << *r.dimension;
    out << ',';
    if (r.curvature) out << format_double(*r.curvature);
    out << ',' << format_double(r.epsilon) << ',' << r.neighbor_count << ','
        << to_string(r.status) << '\n';
  }
}

Json estimate_summary(std::span<const PointRecord> records, std::size_t bins) {
  Json status = Json::object();
  for (PointStatus s : kAllStatuses) {
    status[std::string(to_string(s))] = std::count_if(
        records.begin(), records.end(),
        [s](const PointRecord& r) { return r.status == s; });
  }

  std::vector<std::pair<int, std::size_t>> dims;
  for (const auto& r : records) {
    if (!r.dimension) continue;
    auto it = std::find_if(dims.begin(), dims.end(),
                           [&](const auto& e) { return e.first == *r.dimension; });
    if (it == dims.end())
      dims.emplace_back(*r.dimension, 1);
    else
      ++it->second;
  }
  std::sort(dims.begin(), dims.end());
  Json dim_hist = Json::object();
  for (const auto& [d, c] : dims) dim_hist[std::to_string(d)] = c;

  const std::vector<double> values = ok_curvatures(records);
  const Histogram h = make_histogram(values, bins);
  Json edges = Json::array();
  for (std::size_t k = 0; k <= bins; ++k) edges.push_back(h.edge(k));

  const auto sparse = std::count_if(records.begin(), records.end(),
                                    [](const PointRecord& r) { return r.sparse_fit; });

  Json j;
  j["points"] = records.size();
  j["status_counts"] = std::move(status);
  j["sparse_fits"] = sparse;
  j["dimension_histogram"] = std::move(dim_hist);
  Json curv;
  curv["count"] = values.size();
  curv["median"] = median(values);
  curv["bins"] = bins;
  curv["edges"] = std::move(edges);
  curv["counts"] = h.counts;
  j["curvature_histogram"] = std::move(curv);
  return j;
}

void write_cluster_csv(std::ostream& out, const PointCloud& cloud,
                       std::span<const PointRecord> records,
                       const CurvatureClustering& clustering) {
  out << "idx";
  write_coordinate_header(out, cloud.dim());
  out << ",curvature,a,label,flag\n";
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    out << i;
    write_coordinates(out, cloud, i);
    out << ',';
    if (records[i].curvature) out << format_double(*records[i].curvature);
    out << ',' << format_double(clustering.levels[i]) << ','
        << clustering.labeling.labels[i] << ','
        << (clustering.flagged[i] ? 1 : 0) << '\n';
  }
}

}  // namespace datacurv::cli
