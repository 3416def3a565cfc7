"""Optimal delayed feedback control of one-dimensional chaotic maps."""

from .coeffs import ControlConfig, epsilon_trick, mu_bound, optimal_coeffs, optimal_coeffs_t1, optimal_coeffs_t2
from .dynamics import MapSpec, detect_cycles, iterate_map, logistic, simulate, soc
from .stability import build_char_poly, is_schur_stable, mu_margin, multiplier_region
from .trigpoly import CoefficientVector, TrigPolyPair, evaluate_pair, fejer_kernel

__all__ = [
    "CoefficientVector",
    "ControlConfig",
    "MapSpec",
    "TrigPolyPair",
    "build_char_poly",
    "detect_cycles",
    "epsilon_trick",
    "evaluate_pair",
    "fejer_kernel",
    "is_schur_stable",
    "iterate_map",
    "logistic",
    "mu_bound",
    "mu_margin",
    "multiplier_region",
    "optimal_coeffs",
    "optimal_coeffs_t1",
    "optimal_coeffs_t2",
    "simulate",
    "soc",
]
__version__ = "0.1.0"
