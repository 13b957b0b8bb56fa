"""Local dimension and curvature estimation for point clouds."""

from ._core import (
    CholeskyFailure,
    DegenerateCloud,
    DimensionMismatch,
    Error,
    EstimationError,
    InvalidArgument,
    ParseError,
    adaptive_radii,
    ball_query,
    cluster,
    compute_dimension,
    covariance_from_point,
    curvature_field,
    diameter,
    eigendecompose,
    fit_quadratic,
    gen_cylinder_with_caps,
    gen_noisy_manifold,
    gen_paraboloid,
    gen_sphere,
    lln_experiment,
    load_cloud,
    single_linkage,
)

__all__ = [name for name in dir() if not name.startswith("_")]
