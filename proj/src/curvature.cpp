#include "datacurv/curvature.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "datacurv/adaptive_radius.hpp"
#include "datacurv/parallel.hpp"
#include "dense_solve.hpp"

namespace datacurv {

QuadraticForm::QuadraticForm(int dimension)
    : dim_(dimension),
      upper_(static_cast<std::size_t>(quadratic_unknowns(dimension)), 0.0) {
  if (dimension < 1) throw InvalidArgument("quadratic form needs K >= 1");
}

std::size_t QuadraticForm::slot(int i, int j) const noexcept {
  if (i > j) std::swap(i, j);
  return static_cast<std::size_t>(i * dim_ - i * (i - 1) / 2 + (j - i));
}

double QuadraticForm::operator()(int i, int j) const noexcept {
  return upper_[slot(i, j)];
}

void QuadraticForm::set(int i, int j, double value) noexcept {
  upper_[slot(i, j)] = value;
}

Eigen::MatrixXd QuadraticForm::matrix() const {
  Eigen::MatrixXd m(dim_, dim_);
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < dim_; ++j) m(i, j) = (*this)(i, j);
  }
  return m;
}

double QuadraticForm::evaluate(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  double sum = 0.0;
  for (int i = 0; i < dim_; ++i) {
    sum += 0.5 * (*this)(i, i) * x[i] * x[i];
    for (int j = i + 1; j < dim_; ++j) sum += (*this)(i, j) * x[i] * x[j];
  }
  return sum;
}

Eigen::MatrixXd local_coordinates(const PointCloud& cloud,
                                  std::span<const std::size_t> B,
                                  std::span<const double> p,
                                  const LocalFrame& frame) {
  if (static_cast<int>(p.size()) != cloud.dim() ||
      frame.vectors.rows() != cloud.dim()) {
    throw DimensionMismatch("frame and point dimensions differ from cloud");
  }
  const auto base = as_vector(p);
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(B.size()), frame.vectors.cols());
  Eigen::Index r = 0;
  for (std::size_t i : B) {
    rows.row(r++) = ((as_vector(cloud.point(i)) - base).transpose() * frame.vectors);
  }
  return rows;
}

namespace {

// Basis row for one sample: 1/2 x_i^2 for a_ii, x_i x_j for a_ij (i < j).
void basis_row(const Eigen::Ref<const Eigen::RowVectorXd>& x, int K,
               Eigen::VectorXd& phi) {
  Eigen::Index k = 0;
  for (int i = 0; i < K; ++i) {
    phi[k++] = 0.5 * x[i] * x[i];
    for (int j = i + 1; j < K; ++j) phi[k++] = x[i] * x[j];
  }
}

}  // namespace

QuadraticForm fit_quadratic(const Eigen::Ref<const Eigen::MatrixXd>& rows,
                            int K) {
  if (K < 1 || rows.cols() != K + 1) {
    throw InvalidArgument("fit_quadratic needs K >= 1 and K + 1 columns");
  }
  const int m = quadratic_unknowns(K);
  if (rows.rows() < m) {
    throw EstimationError(PointStatus::underdetermined_fit,
                          "fit needs at least " + std::to_string(m) +
                              " samples, got " + std::to_string(rows.rows()));
  }
  Eigen::MatrixXd normal = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd phi(m);
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    basis_row(rows.row(r), K, phi);
    normal.selfadjointView<Eigen::Upper>().rankUpdate(phi);
    rhs += phi * rows(r, K);
  }
  for (int r = 1; r < m; ++r) {
    for (int c = 0; c < r; ++c) normal(r, c) = normal(c, r);
  }

  const auto spectrum = eigendecompose(normal).values;
  const double largest = spectrum[0];
  const double smallest = spectrum[m - 1];
  if (!(largest > 0.0) || !(smallest > 0.0) ||
      largest > kMaxFitCondition * smallest) {
    throw EstimationError(PointStatus::singular_system,
                          "normal equations are singular or ill-conditioned");
  }
  Eigen::MatrixXd work = normal;
  detail::eliminate(work, &rhs);

  QuadraticForm form(K);
  Eigen::Index k = 0;
  for (int i = 0; i < K; ++i) {
    for (int j = i; j < K; ++j) form.set(i, j, rhs[k++]);
  }
  return form;
}

double fit_residual(const Eigen::Ref<const Eigen::MatrixXd>& rows,
                    const QuadraticForm& form) {
  const int K = form.dimension();
  double sum = 0.0;
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    const double e = form.evaluate(rows.row(r).head(K).transpose()) - rows(r, K);
    sum += e * e;
  }
  return sum;
}

double hessian_determinant(const QuadraticForm& form) {
  Eigen::MatrixXd a = form.matrix();
  return detail::eliminate(a, nullptr);
}

double compute_curvature(const PointCloud& cloud,
                         std::span<const std::size_t> B,
                         std::span<const double> p, const LocalFrame& frame) {
  const auto rows = local_coordinates(cloud, B, p, frame);
  return hessian_determinant(fit_quadratic(rows, frame.dimension));
}

DimensionCurvature dimension_and_curvature(const PointCloud& cloud,
                                           const SpatialIndex& index,
                                           std::span<const double> p,
                                           double eps, double delta) {
  const IndexSet B = index.ball_query(p, eps);
  const LocalFrame frame = frame_from_neighborhood(cloud, B, p, delta);
  DimensionCurvature out;
  out.dimension = frame.dimension;
  out.neighbor_count = B.size();
  out.curvature = compute_curvature(cloud, B, p, frame);
  out.sparse_fit =
      B.size() < 2 * static_cast<std::size_t>(quadratic_unknowns(frame.dimension));
  return out;
}

PointRecord evaluate_point(const PointCloud& cloud, const SpatialIndex& index,
                           std::size_t i, double eps, double delta) {
  PointRecord rec;
  rec.index = i;
  rec.epsilon = eps;
  const auto p = cloud.point(i);
  const IndexSet B = index.ball_query(p, eps);
  rec.neighbor_count = B.size();

  LocalFrame frame;
  try {
    frame = frame_from_neighborhood(cloud, B, p, delta);
  } catch (const EstimationError& e) {
    rec.status = e.status();
    if (e.status() == PointStatus::zero_dimension) rec.dimension = 0;
    if (e.status() == PointStatus::no_normal_direction) rec.dimension = cloud.dim();
    return rec;
  }
  rec.dimension = frame.dimension;
  try {
    rec.curvature = compute_curvature(cloud, B, p, frame);
    rec.sparse_fit =
        B.size() < 2 * static_cast<std::size_t>(quadratic_unknowns(frame.dimension));
  } catch (const EstimationError& e) {
    rec.status = e.status();
  }
  return rec;
}

std::vector<PointRecord> curvature_field(const PointCloud& cloud,
                                         const SpatialIndex& index,
                                         const RadiusAssignment& radii,
                                         const FieldOptions& options) {
  if (!(options.delta > 0.0)) throw InvalidArgument("delta must be positive");
  if (radii.epsilons.size() != cloud.size())
    throw DimensionMismatch("radius assignment does not match the cloud");
  std::vector<PointRecord> records(cloud.size());
  parallel_for(cloud.size(), options.threads, [&](std::size_t i) {
    records[i] = evaluate_point(cloud, index, i, radii.epsilons[i], options.delta);
  });
  return records;
}

std::vector<PointRecord> curvature_field(const PointCloud& cloud, double eta,
                                         const FieldOptions& options) {
  if (!(options.delta > 0.0)) throw InvalidArgument("delta must be positive");
  const SpatialIndex index(cloud);
  return curvature_field(cloud, index, adaptive_radii(cloud, index, eta), options);
}

}  // namespace datacurv
