"""Numerical transport calculus in fibre bundles."""

from tam._core import (
    eval_map,
    partial_derivative,
    second_partial_derivative,
    groupoid_residuals,
    sphere_holonomy_angle,
    sphere_curvature_residual,
    metric_roundtrip_max_error,
    list_scenarios,
    run,
)

__all__ = [
    "eval_map",
    "partial_derivative",
    "second_partial_derivative",
    "groupoid_residuals",
    "sphere_holonomy_angle",
    "sphere_curvature_residual",
    "metric_roundtrip_max_error",
    "list_scenarios",
    "run",
]
