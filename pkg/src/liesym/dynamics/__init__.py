"""Numeric back end: Euler–Lagrange systems, RK4, drift, PDE residuals, Bessel functions."""
from .bessel import SPECIAL_FUNCTIONS, bessel, bessel_derivative, bessel_i, bessel_k, besselI, besselK
from .closed_form import (
    ClosedForm, compare_metrics, on_family, reconstruct_static_metric, verify_closed_form,
)
from .pde import SolutionCandidate, pde_residual, pde_residuals, sample_points, scale_of
from .system import DynamicalSystem, Drift, Trajectory, drift, euler_lagrange, evaluate_along, integrate

__all__ = [
    "SPECIAL_FUNCTIONS", "ClosedForm", "Drift", "DynamicalSystem", "SolutionCandidate", "Trajectory",
    "bessel", "bessel_derivative", "compare_metrics", "reconstruct_static_metric", "bessel_i", "bessel_k", "besselI", "besselK", "drift",
    "euler_lagrange", "evaluate_along", "integrate", "on_family", "pde_residual", "pde_residuals",
    "sample_points", "scale_of", "verify_closed_form",
]
