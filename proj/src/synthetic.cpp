#include "datacurv/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Cholesky>

#include "datacurv/errors.hpp"
#include "datacurv/parallel.hpp"

namespace datacurv {

PointCloud gen_paraboloid(int sign, std::size_t n, Seed seed) {
  if (sign == 0) throw InvalidArgument("paraboloid sign must be +1 or -1");
  if (n == 0) throw InvalidArgument("need at least one point");
  CounterRng rng(seed);
  std::vector<double> coords;
  coords.reserve(3 * n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = rng.uniform(-1.0, 1.0);
    const double y = rng.uniform(-1.0, 1.0);
    const double z = sign < 0 ? -x * x - y * y : x * x - y * y;
    coords.insert(coords.end(), {x, y, z});
  }
  return PointCloud(std::move(coords), 3);
}

namespace {

Eigen::Vector3d random_direction(CounterRng& rng) {
  while (true) {
    Eigen::Vector3d g(rng.normal(), rng.normal(), rng.normal());
    const double norm = g.norm();
    if (norm > 1e-12) return g / norm;
  }
}

}  // namespace

PointCloud gen_sphere(double radius, std::size_t n, Seed seed) {
  if (!(radius > 0.0)) throw InvalidArgument("sphere radius must be positive");
  if (n == 0) throw InvalidArgument("need at least one point");
  CounterRng rng(seed);
  std::vector<double> coords;
  coords.reserve(3 * n);
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Vector3d u = random_direction(rng);
    coords.insert(coords.end(), {radius * u.x(), radius * u.y(), radius * u.z()});
  }
  return PointCloud(std::move(coords), 3);
}

std::string_view to_string(CylinderPart part) noexcept {
  switch (part) {
    case CylinderPart::side: return "side";
    case CylinderPart::cap_bottom: return "cap_bottom";
    case CylinderPart::cap_top: return "cap_top";
  }
  return "unknown";
}

std::vector<int> LabeledCloud::part_labels() const {
  std::vector<int> out;
  out.reserve(parts.size());
  for (auto p : parts) out.push_back(static_cast<int>(p));
  return out;
}

LabeledCloud gen_cylinder_with_caps(CapKind cap, std::size_t n_side,
                                    std::size_t n_cap, Seed seed,
                                    double cap_height) {
  if (n_side + 2 * n_cap == 0) throw InvalidArgument("need at least one point");
  if (cap == CapKind::hemi_ellipsoid && !(cap_height > 0.0)) {
    throw InvalidArgument("cap height must be positive");
  }
  CounterRng rng(seed);
  std::vector<double> coords;
  coords.reserve(3 * (n_side + 2 * n_cap));
  std::vector<CylinderPart> parts;
  parts.reserve(n_side + 2 * n_cap);

  for (std::size_t i = 0; i < n_side; ++i) {
    const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double z = rng.uniform();
    coords.insert(coords.end(), {std::cos(theta), std::sin(theta), z});
    parts.push_back(CylinderPart::side);
  }

  // Mapping the unit sphere through diag(1, 1, c) scales area by
  // sqrt(c^2 (ux^2 + uy^2) + uz^2) <= max(c, 1); rejection on that factor
  // gives uniform area on the spheroid.
  const double c = cap_height;
  const double max_stretch = std::max(c, 1.0);
  auto sample_cap = [&](bool top) {
    if (cap == CapKind::disc) {
      const double r = std::sqrt(rng.uniform());
      const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
      coords.insert(coords.end(), {r * std::cos(theta), r * std::sin(theta),
                                   top ? 1.0 : 0.0});
      return;
    }
    while (true) {
      const Eigen::Vector3d u = random_direction(rng);
      const double stretch = std::sqrt(
          c * c * (u.x() * u.x() + u.y() * u.y()) + u.z() * u.z());
      if (rng.uniform() * max_stretch >= stretch) continue;
      const double h = c * std::abs(u.z());
      coords.insert(coords.end(), {u.x(), u.y(), top ? 1.0 + h : -h});
      return;
    }
  };
  for (std::size_t i = 0; i < n_cap; ++i) {
    sample_cap(false);
    parts.push_back(CylinderPart::cap_bottom);
  }
  for (std::size_t i = 0; i < n_cap; ++i) {
    sample_cap(true);
    parts.push_back(CylinderPart::cap_top);
  }
  return LabeledCloud{PointCloud(std::move(coords), 3), std::move(parts)};
}

std::string_view to_string(MeanSurface surface) noexcept {
  switch (surface) {
    case MeanSurface::plane: return "plane";
    case MeanSurface::upper_hemisphere: return "upper_hemisphere";
    case MeanSurface::lower_hemisphere: return "lower_hemisphere";
  }
  return "unknown";
}

Eigen::MatrixXd GrfModel::covariance() const {
  const Eigen::Index n = base_points.rows();
  Eigen::MatrixXd c(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    c(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d2 = (base_points.row(i) - base_points.row(j)).squaredNorm();
      c(i, j) = std::exp(-d2);
      c(j, i) = c(i, j);
    }
  }
  return c;
}

RowMatrix sample_base_points(MeanSurface surface, std::size_t n, Seed seed) {
  CounterRng rng(seed);
  RowMatrix a(static_cast<Eigen::Index>(n), 2);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    if (surface == MeanSurface::plane) {
      a(i, 0) = rng.uniform(-1.0, 1.0);
      a(i, 1) = rng.uniform(-1.0, 1.0);
    } else {
      const double r = kHemisphereBaseRadius * std::sqrt(rng.uniform());
      const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
      a(i, 0) = r * std::cos(theta);
      a(i, 1) = r * std::sin(theta);
    }
  }
  return a;
}

GrfModel make_grf_model(MeanSurface surface, std::size_t n, double sigma,
                        Seed seed) {
  if (n == 0) throw InvalidArgument("need at least one base point");
  if (!(sigma >= 0.0)) throw InvalidArgument("sigma must be non-negative");
  return GrfModel{sample_base_points(surface, n, derive_seed(seed, 0)), sigma,
                  surface};
}

GrfSampler::GrfSampler(const GrfModel& model) {
  const Eigen::MatrixXd c = model.covariance();
  const Eigen::Index n = c.rows();
  const double mean_diag = c.diagonal().mean();
  for (double scale : {1e-12, 1e-10, 1e-8}) {
    Eigen::MatrixXd jittered = c;
    jittered.diagonal().array() += scale * mean_diag;
    Eigen::LLT<Eigen::MatrixXd> llt(jittered);
    if (llt.info() == Eigen::Success) {
      factor_ = llt.matrixL();
      jitter_ = scale * mean_diag;
      return;
    }
  }
  throw CholeskyFailure("GRF covariance is not positive definite after jitter "
                        "1e-8 (n = " + std::to_string(n) + ")");
}

Eigen::VectorXd GrfSampler::sample(Seed seed) const {
  CounterRng rng(seed);
  Eigen::VectorXd z(factor_.rows());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.normal();
  return factor_.triangularView<Eigen::Lower>() * z;
}

Eigen::VectorXd grf_sample(const GrfModel& model, Seed seed) {
  return GrfSampler(model).sample(seed);
}

void surface_frames(const GrfModel& model, RowMatrix& points,
                    RowMatrix& normals) {
  const Eigen::Index n = model.base_points.rows();
  points.resize(n, 3);
  normals.resize(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = model.base_points(i, 0);
    const double y = model.base_points(i, 1);
    if (model.surface == MeanSurface::plane) {
      points.row(i) << x, y, 0.0;
      normals.row(i) << 0.0, 0.0, 1.0;
      continue;
    }
    const double rho2 = x * x + y * y;
    if (rho2 >= 1.0) throw InvalidArgument("hemisphere base point outside unit disc");
    const double h = std::sqrt(1.0 - rho2);
    const double z = model.surface == MeanSurface::upper_hemisphere ? h : -h;
    points.row(i) << x, y, z;
    normals.row(i) << x, y, z;  // radial direction on the unit sphere
  }
}

PointCloud gen_noisy_manifold(const GrfModel& model, const GrfSampler& sampler,
                              Seed seed) {
  RowMatrix points, normals;
  surface_frames(model, points, normals);
  if (model.sigma > 0.0) {
    const Eigen::VectorXd x = sampler.sample(seed);
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
      points.row(i) += (model.sigma * x[i]) * normals.row(i);
    }
  }
  return PointCloud::from_matrix(points);
}

PointCloud gen_noisy_manifold(const GrfModel& model, Seed seed) {
  return gen_noisy_manifold(model, GrfSampler(model), seed);
}

LlnResult lln_experiment(const GrfModel& model, std::size_t runs, double eta,
                         double delta, Seed seed, unsigned threads) {
  if (runs == 0) throw InvalidArgument("runs must be at least 1");
  const GrfSampler sampler(model);
  const std::size_t n = model.size();
  const double nan = std::numeric_limits<double>::quiet_NaN();

  LlnResult out;
  out.run_curvature.assign(runs, std::vector<double>(n, nan));
  // Runs are independent given their sub-seeds; points inside a run are not
  // parallelized again.
  parallel_for(runs, threads, [&](std::size_t r) {
    const PointCloud cloud = gen_noisy_manifold(model, sampler, lln_run_seed(seed, r));
    const auto records = curvature_field(cloud, eta, {delta, 1});
    for (std::size_t i = 0; i < n; ++i) {
      if (records[i].status == PointStatus::ok) {
        out.run_curvature[r][i] = *records[i].curvature;
      }
    }
  });

  out.mean_curvature.assign(n, nan);
  out.ok_runs.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t r = 0; r < runs; ++r) {
      const double c = out.run_curvature[r][i];
      if (std::isnan(c)) continue;
      sum += c;
      ++out.ok_runs[i];
    }
    if (out.ok_runs[i] > 0) out.mean_curvature[i] = sum / static_cast<double>(out.ok_runs[i]);
  }
  return out;
}

}  // namespace datacurv
