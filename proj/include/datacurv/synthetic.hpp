#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "datacurv/curvature.hpp"
#include "datacurv/point_cloud.hpp"
#include "datacurv/rng.hpp"

namespace datacurv {

using Seed = std::uint64_t;

// ---------------------------------------------------------------------------
// Noise-free test surfaces. Every generator is a pure function of its
// parameters and seed.
// ---------------------------------------------------------------------------

/// (x, y) uniform on [-1, 1]^2; z = -x^2 - y^2 for sign < 0, x^2 - y^2 for
/// sign > 0. Throws InvalidArgument for sign == 0 or n == 0.
PointCloud gen_paraboloid(int sign, std::size_t n, Seed seed);

/// Uniform on the sphere of the given radius (normalized Gaussians).
/// Throws InvalidArgument for radius <= 0.
PointCloud gen_sphere(double radius, std::size_t n, Seed seed);

enum class CapKind { disc, hemi_ellipsoid };
enum class CylinderPart : int { side = 0, cap_bottom = 1, cap_top = 2 };

std::string_view to_string(CylinderPart part) noexcept;

struct LabeledCloud {
  PointCloud cloud;
  std::vector<CylinderPart> parts;

  std::vector<int> part_labels() const;
};

/// Polar semi-axis of the default hemi-ellipsoid caps.
inline constexpr double kDefaultCapHeight = 2.0;

/// Unit-radius cylinder of height 1 (points 0..n_side-1, uniform area),
/// followed by n_cap bottom-cap and n_cap top-cap points. Disc caps are
/// uniform on the unit discs at z = 0 and z = 1. Hemi-ellipsoid caps are the
/// halves of x^2 + y^2 + (z/c)^2 = 1 below z = 0 and above z = 1 (shifted),
/// sampled uniformly in area by rejection; c = cap_height.
LabeledCloud gen_cylinder_with_caps(CapKind cap, std::size_t n_side,
                                    std::size_t n_cap, Seed seed,
                                    double cap_height = kDefaultCapHeight);

// ---------------------------------------------------------------------------
// Gaussian random field noise model.
// ---------------------------------------------------------------------------

enum class MeanSurface { plane, upper_hemisphere, lower_hemisphere };

std::string_view to_string(MeanSurface surface) noexcept;

/// Base points a_i in R^2, RBF covariance C_ij = exp(-|a_i - a_j|^2), noise
/// scale sigma and the mean surface f. Points are p_i = f(a_i) + sigma X_i n_i
/// with X ~ N(0, C) and n_i the unit normal of f at a_i.
struct GrfModel {
  RowMatrix base_points;  // N x 2
  double sigma = 0.1;
  MeanSurface surface = MeanSurface::plane;

  std::size_t size() const noexcept {
    return static_cast<std::size_t>(base_points.rows());
  }
  Eigen::MatrixXd covariance() const;
};

/// Radius of the disc that hemisphere base points are drawn from.
inline constexpr double kHemisphereBaseRadius = 0.99;

/// n base points: uniform on [-1, 1]^2 for the plane, uniform on the disc of
/// radius kHemisphereBaseRadius for the hemispheres.
RowMatrix sample_base_points(MeanSurface surface, std::size_t n, Seed seed);

GrfModel make_grf_model(MeanSurface surface, std::size_t n, double sigma,
                        Seed seed);

/// Lower Cholesky factor of C + jitter * I. The jitter ladder is
/// {1e-12, 1e-10, 1e-8} times the mean diagonal; CholeskyFailure beyond.
class GrfSampler {
 public:
  explicit GrfSampler(const GrfModel& model);

  /// X = L Z with Z standard normal drawn from CounterRng(seed).
  Eigen::VectorXd sample(Seed seed) const;

  double jitter() const noexcept { return jitter_; }
  const Eigen::MatrixXd& factor() const noexcept { return factor_; }

 private:
  Eigen::MatrixXd factor_;
  double jitter_ = 0.0;
};

Eigen::VectorXd grf_sample(const GrfModel& model, Seed seed);

/// Surface point f(a_i) and unit normal n_i for every base point.
void surface_frames(const GrfModel& model, RowMatrix& points,
                    RowMatrix& normals);

/// Noisy sample p_i = f(a_i) + (sigma X_i) n_i with X = grf_sample(model, seed).
PointCloud gen_noisy_manifold(const GrfModel& model, Seed seed);
PointCloud gen_noisy_manifold(const GrfModel& model, const GrfSampler& sampler,
                              Seed seed);

/// Noise seed of LLN run r (0-based).
inline Seed lln_run_seed(Seed seed, std::size_t run) {
  return derive_seed(seed, static_cast<std::uint64_t>(run) + 1);
}

struct LlnResult {
  std::vector<double> mean_curvature;  // NaN where no run was ok
  std::vector<std::size_t> ok_runs;
  /// curvature[r][i]; NaN when status != ok.
  std::vector<std::vector<double>> run_curvature;
};

/// Base points stay fixed (those of `model`); noise is redrawn per run with
/// lln_run_seed(seed, r). Runs may execute in any order. Throws
/// InvalidArgument for runs == 0.
LlnResult lln_experiment(const GrfModel& model, std::size_t runs, double eta,
                         double delta, Seed seed, unsigned threads = 1);

}  // namespace datacurv
