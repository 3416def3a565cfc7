"""Brute-force ground truth for the extremal problems at small depth."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import cos, pi, sin

import numpy as np

from .trigpoly import fejer_kernel, objective_t1, objective_t2

BOX = (-2.0, 2.0)


@dataclass(frozen=True)
class GridSearch:
    """Best weight vector found by a grid search and the objective there."""

    value: float
    a: np.ndarray
    points: np.ndarray  # first-level grid, full weight vectors
    values: np.ndarray  # objective on ``points``


def _full_weights(free: np.ndarray) -> np.ndarray:
    """Prepend ``a_1 = 1 - sum(rest)`` to each row of free weights."""
    return np.column_stack([1.0 - free.sum(axis=1), free])


def _search(objective, n: int, grid: int, levels: int, maximize: bool) -> GridSearch:
    if n not in (1, 2, 3):
        raise ValueError("brute force is limited to n in (1, 2, 3)")
    if grid < 50:
        raise ValueError("grid must be at least 50")
    if n == 1:
        a = np.array([[1.0]])
        v = objective(a)
        return GridSearch(float(v[0]), a[0], a, v)
    sign = 1.0 if maximize else -1.0
    lo = np.full(n - 1, BOX[0])
    hi = np.full(n - 1, BOX[1])
    best_a, best_v = None, -np.inf
    first = None
    for level in range(levels):
        axes = [np.linspace(l, h, grid) for l, h in zip(lo, hi)]
        free = np.array(list(product(*axes)))
        rows = _full_weights(free)
        vals = sign * objective(rows)
        if first is None:
            first = (rows, sign * vals)
        k = int(np.argmax(vals))
        if vals[k] > best_v:
            best_v, best_a = float(vals[k]), rows[k]
        # zoom to a few cells around the incumbent
        step = (hi - lo) / (grid - 1)
        centre = best_a[1:]
        lo, hi = centre - 3 * step, centre + 3 * step
    return GridSearch(sign * best_v, best_a, first[0], first[1])


def brute_force_J1(n: int, grid: int = 400, levels: int = 3) -> float:
    """Grid estimate of ``sup_a min{C(t) : S changes sign at t, or t = pi}`` for T = 1."""
    return search_J1(n, grid, levels).value


def brute_force_J2(n: int, grid: int = 400, levels: int = 3) -> float:
    """Grid estimate of ``inf_a max{|S(t)| : C changes sign at t, or t = pi/2}`` for T = 2."""
    return search_J2(n, grid, levels).value


def search_J1(n: int, grid: int = 400, levels: int = 3) -> GridSearch:
    return _search(objective_t1, n, grid, levels, maximize=True)


def search_J2(n: int, grid: int = 400, levels: int = 3) -> GridSearch:
    return _search(objective_t2, n, grid, levels, maximize=False)


def near_optimal_spread(search: GridSearch, target, band: float = 1e-3, maximize: bool = True) -> float:
    """Largest L-infinity distance from ``target`` among first-level grid points within ``band`` of the optimum."""
    gap = search.value - search.values if maximize else search.values - search.value
    close = search.points[gap <= band]
    return float(np.abs(close - np.asarray(target)).max()) if close.size else 0.0


def _autocorrelation(q: np.ndarray) -> np.ndarray:
    full = np.correlate(q, q, mode="full")
    return full[len(q) - 1:]


def fejer_coefficient_inequality_check(samples: int, n: int, seed: int = 0, slack: float = 1e-10) -> bool:
    """Check ``|a_1| <= 2 cos(pi/(n+2))`` for nonnegative cosine polynomials ``1 + sum a_k cos kt``.

    Random nonnegative polynomials are squared moduli of random real
    polynomials of degree ``n``.  The kernel extremizer must attain the
    bound within 1e-9.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    bound = 2.0 * cos(pi / (n + 2))
    rng = np.random.default_rng(seed)
    q = rng.normal(size=(samples, n + 1))
    r = np.apply_along_axis(_autocorrelation, 1, q)
    a1 = 2.0 * r[:, 1] / r[:, 0] if n >= 1 else np.zeros(samples)
    if np.any(np.abs(a1) > bound + slack):
        return False
    return abs(abs(extremizer_first_coefficient(n)) - bound) < 1e-9


def extremizer_first_coefficient(n: int) -> float:
    """First cosine coefficient of ``(2/(n+2)) sin^2(pi/(n+2)) Phi_n^(1)`` with constant term 1."""
    M = 4 * (n + 2)
    t = 2 * pi * np.arange(M) / M
    vals = 2.0 / (n + 2) * sin(pi / (n + 2)) ** 2 * fejer_kernel(n, 1, t)
    c = np.fft.rfft(vals).real / M
    if abs(c[0] - 1.0) > 1e-9:
        raise ArithmeticError(f"extremizer constant term is {c[0]!r}, expected 1")
    return float(2.0 * c[1])
