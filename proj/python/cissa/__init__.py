"""Circulant singular spectrum analysis (CiSSA) with basic and Toeplitz SSA."""

from ._core import (
    AR1Fit,
    CissaError,
    Component,
    Decomposition,
    ElementarySeries,
    GroupingSpec,
    Realization,
    RegressionCheck,
    SeasonalityReport,
    ar1_fit,
    basic_ssa,
    cissa,
    default_monthly_grouping,
    elementary,
    monte_carlo,
    parse_bands,
    read_series,
    regression_check,
    residual_seasonality_check,
    simulate_linear,
    simulate_nonlinear,
    spectrum,
    toeplitz_ssa,
    w_correlation,
    w_correlation_matrix,
)

__all__ = [
    "AR1Fit",
    "CissaError",
    "Component",
    "Decomposition",
    "ElementarySeries",
    "GroupingSpec",
    "Realization",
    "RegressionCheck",
    "SeasonalityReport",
    "ar1_fit",
    "basic_ssa",
    "cissa",
    "default_monthly_grouping",
    "elementary",
    "monte_carlo",
    "parse_bands",
    "read_series",
    "regression_check",
    "residual_seasonality_check",
    "simulate_linear",
    "simulate_nonlinear",
    "spectrum",
    "toeplitz_ssa",
    "w_correlation",
    "w_correlation_matrix",
]
