"""Optimal feedback weights, their stability margins and related conversions."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import cos, pi, sin, tan

import numpy as np

from .trigpoly import CoefficientVector, as_coefficients, fejer_kernel, sine_quotient_coefficients

DEFAULT_EPS_TRICK = 0.005


class UnsupportedCycleLength(ValueError):
    """No closed form is available for the requested cycle length."""


def _check_depth(n: int) -> int:
    if int(n) != n or n < 1:
        raise ValueError(f"depth n must be a positive integer, got {n!r}")
    return int(n)


def _normalized(values: np.ndarray) -> CoefficientVector:
    # the closed forms sum to 1 analytically; remove the last few ulps of drift
    values = values / values.sum()
    return CoefficientVector(tuple(values))


def optimal_coeffs_t1(n: int) -> CoefficientVector:
    """Extremal weights for stabilizing equilibria (T = 1)."""
    n = _check_depth(n)
    j = np.arange(1, n + 1)
    a = 2.0 * tan(pi / (2 * (n + 1))) * (1.0 - j / (n + 1)) * np.sin(pi * j / (n + 1))
    return _normalized(a)


def optimal_coeffs_t2(n: int) -> CoefficientVector:
    """Extremal weights for stabilizing 2-cycles: ``(2(n-j)+1)/n**2``."""
    n = _check_depth(n)
    j = np.arange(1, n + 1)
    return _normalized((2.0 * (n - j) + 1.0) / n**2)


def optimal_coeffs(T: int, n: int) -> CoefficientVector:
    if T == 1:
        return optimal_coeffs_t1(n)
    if T == 2:
        return optimal_coeffs_t2(n)
    raise UnsupportedCycleLength(f"closed-form weights exist only for T in (1, 2), got T={T}")


def mu_bound(T: int, n: int) -> float:
    """Closed-form margin ``mu_n(T)`` of the optimal weights."""
    n = _check_depth(n)
    if T == 1:
        return 1.0 / tan(pi / (2 * (n + 1))) ** 2
    if T == 2:
        return float(n * n)
    raise UnsupportedCycleLength(f"closed-form margin exists only for T in (1, 2), got T={T}")


def min_depth(T: int, mu_star: float, max_n: int = 100_000) -> int:
    """Smallest ``n`` with ``mu_bound(T, n) > mu_star``."""
    if not mu_star > 1.0:
        raise ValueError("mu_star must exceed 1")
    mu_bound(T, 1)  # validates T
    n = 1
    while mu_bound(T, n) <= mu_star:
        n += 1
        if n > max_n:
            raise ValueError(f"no depth up to {max_n} reaches mu_star={mu_star}")
    return n


def strength_coefficients(a) -> tuple[float, ...]:
    """Gains ``eps_j = 1 - (a_1 + ... + a_j)`` for ``j = 1..n-1``."""
    arr = as_coefficients(a)
    return tuple(float(v) for v in 1.0 - np.cumsum(arr)[:-1])


def coeffs_from_strength(eps) -> CoefficientVector:
    """Inverse of :func:`strength_coefficients`."""
    e = np.concatenate([[1.0], np.asarray(eps, dtype=float), [0.0]])
    return CoefficientVector(tuple(e[:-1] - e[1:]))


def epsilon_trick(a, eps: float) -> CoefficientVector:
    """Shift weight onto ``a_1``: ``((a_1 + eps), a_2, ..., a_n) / (1 + eps)``."""
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    arr = as_coefficients(a).copy()
    if eps == 0:
        return CoefficientVector(tuple(arr))
    arr[0] += eps
    return CoefficientVector(tuple(arr / (1.0 + eps)))


@dataclass(frozen=True)
class ControlConfig:
    """Cycle length, depth and weights of a delayed feedback controller."""

    T: int
    a: CoefficientVector
    eps_trick: float = 0.0
    eps_strength: tuple[float, ...] = field(init=False)

    def __post_init__(self) -> None:
        if int(self.T) != self.T or self.T < 1:
            raise ValueError("cycle length T must be a positive integer")
        if not isinstance(self.a, CoefficientVector):
            object.__setattr__(self, "a", CoefficientVector(tuple(self.a)))
        if self.eps_trick < 0:
            raise ValueError("eps_trick must be nonnegative")
        object.__setattr__(self, "eps_strength", strength_coefficients(self.a))

    @classmethod
    def optimal(cls, T: int, n: int, eps_trick: float = 0.0) -> "ControlConfig":
        a = optimal_coeffs(T, n)
        if eps_trick:
            a = epsilon_trick(a, eps_trick)
        return cls(T=T, a=a, eps_trick=eps_trick)

    @classmethod
    def from_strength(cls, T: int, eps) -> "ControlConfig":
        return cls(T=T, a=coeffs_from_strength(eps))

    @property
    def n(self) -> int:
        return self.a.n

    @property
    def prehistory_depth(self) -> int:
        return (self.n - 1) * self.T


# ---------------------------------------------------------------------------
# Suffridge polynomials and kernel relations


def suffridge_poly(n: int, k: int) -> np.ndarray:
    """Coefficients of ``s_{k,n}``; entry ``j-1`` multiplies ``z**j``."""
    n = _check_depth(n)
    if not 1 <= k <= n:
        raise ValueError("index k must satisfy 1 <= k <= n")
    j = np.arange(1, n + 1)
    c = (n - j + 1) / n * np.sin(k * pi * j / (n + 1)) / sin(k * pi / (n + 1))
    c[0] = 1.0
    return c


def suffridge_relation_t1(n: int) -> float:
    """Coefficientwise gap in ``z p(z) = 4 n/(n+1) sin^2(pi/(2(n+1))) s_{1,n}(z)``."""
    a = optimal_coeffs_t1(n).as_array()
    lam = 4.0 * n / (n + 1) * sin(pi / (2 * (n + 1))) ** 2
    return float(np.abs(a - lam * suffridge_poly(n, 1)).max())


def suffridge_relation_t2(n: int) -> float:
    """Coefficientwise gap in ``z p(z^2) = -i (2n-1)/n^2 s_{n,2n-1}(iz)``."""
    a = optimal_coeffs_t2(n).as_array()
    N = 2 * n - 1
    lhs = np.zeros(N, dtype=complex)
    lhs[0::2] = a  # z p(z^2) carries a_j on z^(2j-1)
    rhs = -1j * (N / n**2) * suffridge_poly(N, n) * (1j ** np.arange(1, N + 1))
    return float(np.abs(lhs - rhs).max())


def kernel_relation_t1(n: int, grid: int = 4096) -> float:
    """Sup gap between ``S(t)`` of the T=1 weights and its Fejer-kernel form."""
    a = optimal_coeffs_t1(n).as_array()
    t = np.linspace(0.0, 2 * pi, grid, endpoint=False)
    S = np.sin(np.outer(t, np.arange(1, n + 1))) @ a
    rhs = 2.0 * (1.0 - cos(pi / (n + 1))) / (n + 1) * np.sin(t) * fejer_kernel(n - 1, 1, t)
    return float(np.abs(S - rhs).max())


def kernel_relation_t2(n: int, grid: int = 4096) -> float:
    """Sup gap between ``C(t)`` of the T=2 weights and its Fejer-kernel form."""
    a = optimal_coeffs_t2(n).as_array()
    t = np.linspace(0.0, 2 * pi, grid, endpoint=False)
    C = np.cos(np.outer(t, 2 * np.arange(1, n + 1) - 1)) @ a
    rhs = np.cos(t) * fejer_kernel(n - 1, 2, 2 * t) / n**2
    return float(np.abs(C - rhs).max())


def fejer_gamma_gap(n: int) -> float:
    """``cos(pi/(n+1)) |gamma_1| - |gamma_2|`` for the T=1 weights (nonnegative)."""
    g = sine_quotient_coefficients(optimal_coeffs_t1(n))
    if n < 2:
        return float(abs(g[0]))
    return float(cos(pi / (n + 1)) * abs(g[0]) - abs(g[1]))
