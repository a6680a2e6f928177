"""Shape optimization of the second Dirichlet eigenvalue at fixed perimeter."""

from ._eigenshape import (
    ConfigError,
    DegenerateEigenvalue,
    Discretization,
    Error,
    FourierBoundary,
    InputError,
    InvalidBoundary,
    NoConvergence,
    ShapeSpectrum,
    analyze,
    area,
    compute_spectrum,
    curvature,
    curvature_zeros,
    d_lambda_discrete,
    d_lambda_double_matrix,
    d_lambda_simple,
    d_objective,
    d_perimeter,
    default_config,
    gauss_check,
    lagrange_multiplier,
    minimize,
    perimeter,
    reference_values,
    rellich_check,
    render_svg,
    run_cli,
    validate,
)

__version__ = "0.1.0"
