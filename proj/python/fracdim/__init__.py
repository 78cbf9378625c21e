"""Fractional integrals of bivariate functions and box dimension of their graphs."""

from ._fracdim import (
    BoxCountCurve,
    DimensionEstimate,
    DomainError,
    InvalidArgument,
    OperatorSpec,
    OracleResult,
    Rect,
    SampledSurface,
    Surface,
    box_count,
    box_count_curve,
    direct_singular,
    estimate_dimension,
    fractional_integral,
    gamma,
    hadamard_point,
    hadamard_point_1d,
    integrate_grid,
    jacobi_rule,
    katugampola_point,
    kernel_rule,
    lemma31_bounds,
    linear_combination,
    range_over_cell,
    rho_limit_gap,
    sample_surface,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
