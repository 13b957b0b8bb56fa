#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "datacurv/adaptive_radius.hpp"
#include "datacurv/cloud_io.hpp"
#include "datacurv/clustering.hpp"
#include "datacurv/curvature.hpp"
#include "datacurv/errors.hpp"
#include "datacurv/local_pca.hpp"
#include "datacurv/spatial_index.hpp"
#include "datacurv/synthetic.hpp"

namespace py = pybind11;
using namespace datacurv;

namespace {

using Points = py::array_t<double, py::array::c_style | py::array::forcecast>;

PointCloud to_cloud(const Points& points) {
  if (points.ndim() != 2) throw InvalidArgument("points must be an (N, n) array");
  const auto rows = static_cast<std::size_t>(points.shape(0));
  const auto dim = static_cast<int>(points.shape(1));
  std::vector<double> coords(points.data(), points.data() + rows * dim);
  return PointCloud(std::move(coords), dim);
}

py::array_t<double> to_array(const PointCloud& cloud) {
  py::array_t<double> out({cloud.size(), static_cast<std::size_t>(cloud.dim())});
  std::copy(cloud.coords().begin(), cloud.coords().end(), out.mutable_data());
  return out;
}

std::vector<double> as_point(const Points& p) {
  return std::vector<double>(p.data(), p.data() + p.size());
}

MeanSurface parse_surface(const std::string& name) {
  if (name == "plane") return MeanSurface::plane;
  if (name == "upper") return MeanSurface::upper_hemisphere;
  if (name == "lower") return MeanSurface::lower_hemisphere;
  throw InvalidArgument("surface must be 'plane', 'upper' or 'lower'");
}

py::dict records_to_dict(const std::vector<PointRecord>& records) {
  const std::size_t n = records.size();
  py::array_t<int> dims(n);
  py::array_t<double> curv(n);
  py::array_t<double> eps(n);
  py::array_t<std::size_t> nbrs(n);
  py::array_t<bool> sparse(n);
  py::list status;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = records[i];
    dims.mutable_at(i) = r.dimension.value_or(-1);
    curv.mutable_at(i) = r.curvature.value_or(std::numeric_limits<double>::quiet_NaN());
    eps.mutable_at(i) = r.epsilon;
    nbrs.mutable_at(i) = r.neighbor_count;
    sparse.mutable_at(i) = r.sparse_fit;
    status.append(std::string(to_string(r.status)));
  }
  py::dict d;
  d["dimension"] = dims;
  d["curvature"] = curv;
  d["epsilon"] = eps;
  d["neighbor_count"] = nbrs;
  d["sparse_fit"] = sparse;
  d["status"] = status;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Local dimension and curvature estimation for point clouds";

  // Translators run newest first, so the base class is registered first.
  auto& base = py::register_exception<Error>(m, "Error");
  py::register_exception<ParseError>(m, "ParseError", base);
  py::register_exception<DimensionMismatch>(m, "DimensionMismatch", base);
  py::register_exception<DegenerateCloud>(m, "DegenerateCloud", base);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", base);
  py::register_exception<CholeskyFailure>(m, "CholeskyFailure", base);
  py::register_exception<EstimationError>(m, "EstimationError", base);

  m.def("load_cloud", [](const std::string& path) { return to_array(load_cloud_file(path)); },
        py::arg("path"), "Read an xyz, csv or ASCII PLY file into an (N, n) array.");

  m.def("diameter", [](const Points& pts) { return diameter(to_cloud(pts)); },
        py::arg("points"));

  m.def("ball_query",
        [](const Points& pts, const Points& p, double eps) {
          const PointCloud cloud = to_cloud(pts);
          return SpatialIndex(cloud).ball_query(as_point(p), eps);
        },
        py::arg("points"), py::arg("p"), py::arg("eps"),
        "Indices of points strictly within eps of p, ascending.");

  m.def("adaptive_radii",
        [](const Points& pts, double eta) {
          const RadiusAssignment r = adaptive_radii(to_cloud(pts), eta);
          py::dict d;
          d["eta"] = r.eta;
          d["diameter"] = r.diameter;
          d["radius"] = r.radius;
          d["counts"] = r.counts;
          d["epsilons"] = r.epsilons;
          return d;
        },
        py::arg("points"), py::arg("eta"));

  m.def("covariance_from_point",
        [](const Points& pts, const std::vector<std::size_t>& neighbors, const Points& p) {
          return covariance_from_point(to_cloud(pts), neighbors, as_point(p)).matrix;
        },
        py::arg("points"), py::arg("neighbors"), py::arg("p"));

  m.def("eigendecompose",
        [](const Eigen::MatrixXd& a) {
          const SymmetricEigen e = eigendecompose(a);
          return py::make_tuple(e.values, e.vectors);
        },
        py::arg("matrix"),
        "Jacobi eigendecomposition: (descending values, oriented eigenvector columns).");

  m.def("compute_dimension",
        [](const Points& pts, const Points& p, double eps, double delta) {
          const PointCloud cloud = to_cloud(pts);
          const SpatialIndex index(cloud);
          const LocalFrame f = compute_dimension(cloud, index, as_point(p), eps, delta);
          return py::make_tuple(f.dimension, f.vectors, f.eigenvalues);
        },
        py::arg("points"), py::arg("p"), py::arg("eps"), py::arg("delta"),
        "(K, frame columns u_1..u_{K+1}, eigenvalues).");

  m.def("fit_quadratic",
        [](const Eigen::MatrixXd& rows, int k) { return fit_quadratic(rows, k).matrix(); },
        py::arg("rows"), py::arg("dimension"),
        "Least-squares coefficient matrix of x_{K+1} = 1/2 x^T A x.");

  m.def("curvature_field",
        [](const Points& pts, double eta, double delta, unsigned threads) {
          const PointCloud cloud = to_cloud(pts);
          FieldOptions options;
          options.delta = delta;
          options.threads = threads;
          std::vector<PointRecord> records;
          {
            py::gil_scoped_release release;
            records = curvature_field(cloud, eta, options);
          }
          return records_to_dict(records);
        },
        py::arg("points"), py::arg("eta"), py::arg("delta") = 1e-3,
        py::arg("threads") = 1u);

  m.def("single_linkage",
        [](const Points& pts, double d_prime) {
          return single_linkage_components(to_cloud(pts), d_prime).labels;
        },
        py::arg("points"), py::arg("d_prime"));

  m.def("cluster",
        [](const Points& pts, double eta, double delta, double t, double d,
           std::optional<double> d_prime, unsigned threads) {
          const PointCloud cloud = to_cloud(pts);
          ClusterParams params = ClusterParams::with_default_link(t, d);
          if (d_prime) params.link_distance = *d_prime;
          FieldOptions options;
          options.delta = delta;
          options.threads = threads;
          const auto records = curvature_field(cloud, eta, options);
          const auto c = curvature_clustering(cloud, records, params);
          py::dict out = records_to_dict(records);
          out["labels"] = c.labeling.labels;
          out["sizes"] = c.labeling.sizes;
          out["levels"] = c.levels;
          out["flagged"] = std::vector<bool>(c.flagged.begin(), c.flagged.end());
          return out;
        },
        py::arg("points"), py::arg("eta"), py::arg("delta") = 1e-3,
        py::arg("t") = 4.0, py::arg("d") = 0.5, py::arg("d_prime") = py::none(),
        py::arg("threads") = 1u);

  m.def("gen_paraboloid",
        [](int sign, std::size_t n, Seed seed) { return to_array(gen_paraboloid(sign, n, seed)); },
        py::arg("sign"), py::arg("n"), py::arg("seed"));

  m.def("gen_sphere",
        [](double radius, std::size_t n, Seed seed) { return to_array(gen_sphere(radius, n, seed)); },
        py::arg("radius"), py::arg("n"), py::arg("seed"));

  m.def("gen_cylinder_with_caps",
        [](const std::string& caps, std::size_t n_side, std::size_t n_cap, Seed seed,
           double cap_height) {
          if (caps != "disc" && caps != "hemi")
            throw InvalidArgument("caps must be 'disc' or 'hemi'");
          const LabeledCloud lc =
              gen_cylinder_with_caps(caps == "hemi" ? CapKind::hemi_ellipsoid : CapKind::disc,
                                     n_side, n_cap, seed, cap_height);
          return py::make_tuple(to_array(lc.cloud), lc.part_labels());
        },
        py::arg("caps"), py::arg("n_side"), py::arg("n_cap"), py::arg("seed"),
        py::arg("cap_height") = kDefaultCapHeight,
        "(points, part labels: 0 side, 1 bottom cap, 2 top cap).");

  m.def("gen_noisy_manifold",
        [](const std::string& surface, std::size_t n, double sigma, Seed seed, std::size_t run) {
          const GrfModel model = make_grf_model(parse_surface(surface), n, sigma, seed);
          return py::make_tuple(model.base_points,
                                to_array(gen_noisy_manifold(model, lln_run_seed(seed, run))));
        },
        py::arg("surface"), py::arg("n"), py::arg("sigma"), py::arg("seed"),
        py::arg("run") = 0,
        "(base points, noisy cloud) for the given run's noise draw.");

  m.def("lln_experiment",
        [](const std::string& surface, std::size_t n, double sigma, std::size_t runs,
           double eta, double delta, Seed seed, unsigned threads) {
          const GrfModel model = make_grf_model(parse_surface(surface), n, sigma, seed);
          LlnResult r;
          {
            py::gil_scoped_release release;
            r = lln_experiment(model, runs, eta, delta, seed, threads);
          }
          py::dict d;
          d["base_points"] = model.base_points;
          d["mean_curvature"] = r.mean_curvature;
          d["ok_runs"] = r.ok_runs;
          return d;
        },
        py::arg("surface"), py::arg("n") = 1000, py::arg("sigma") = 0.1,
        py::arg("runs") = 50, py::arg("eta") = 1.0, py::arg("delta") = 0.005,
        py::arg("seed") = 0, py::arg("threads") = 1u);
}
