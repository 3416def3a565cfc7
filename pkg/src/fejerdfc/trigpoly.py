"""Conjugate trigonometric polynomial pairs, Fejer kernels and factorization.

Coefficient convention used throughout the package: a coefficient vector
``a = (a_1, ..., a_n)`` defines ``p(z) = sum_j a_j z**(j-1)`` so that
``z * p(z) = sum_j a_j z**j``.  For a cycle length ``T`` the conjugate pair is
the real/imaginary part of ``exp(it) * p(exp(iTt)) = sum_j a_j exp(i(1 + T(j-1))t)``,
which gives frequencies ``j`` for ``T = 1`` and ``2j - 1`` for ``T = 2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Callable, Sequence

import numpy as np

NORMALIZATION_ATOL = 1e-12
SIGN_GRID = 4096
ROOT_XTOL = 1e-12
SIGN_PROBE = 1e-5
KERNEL_SINGULAR_BAND = 1e-6
IDENTITY_GRID = 2048


class FactorizationError(ValueError):
    """Supplied zeros are not common zeros of ``S`` and ``C - gamma``."""


@dataclass(frozen=True)
class CoefficientVector:
    """Feedback weights ``a_1..a_n`` normalized so that ``p(1) = 1``."""

    a: tuple[float, ...]

    def __post_init__(self) -> None:
        a = tuple(float(v) for v in self.a)
        if len(a) < 1:
            raise ValueError("coefficient vector needs at least one weight")
        total = sum(a)
        if abs(total - 1.0) > NORMALIZATION_ATOL:
            raise ValueError(f"weights must sum to 1 (got {total!r})")
        object.__setattr__(self, "a", a)

    @property
    def n(self) -> int:
        return len(self.a)

    def as_array(self) -> np.ndarray:
        return np.array(self.a, dtype=float)

    def __len__(self) -> int:
        return len(self.a)


def as_coefficients(coeffs: CoefficientVector | Sequence[float] | np.ndarray) -> np.ndarray:
    """Return weights as a float array without enforcing normalization."""
    if isinstance(coeffs, CoefficientVector):
        return coeffs.as_array()
    arr = np.asarray(coeffs, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("coefficients must be a non-empty 1-D sequence")
    return arr


def frequencies(n: int, T: int) -> np.ndarray:
    """Frequencies ``1 + T*(j-1)`` of the pair built from ``n`` weights."""
    if T < 1:
        raise ValueError("cycle length T must be a positive integer")
    return 1 + T * np.arange(n)


@dataclass(frozen=True)
class TrigPolyPair:
    coeffs: CoefficientVector
    T: int = 1

    def __post_init__(self) -> None:
        if not isinstance(self.coeffs, CoefficientVector):
            object.__setattr__(self, "coeffs", CoefficientVector(tuple(self.coeffs)))
        if int(self.T) != self.T or self.T < 1:
            raise ValueError("cycle length T must be a positive integer")

    @property
    def freqs(self) -> np.ndarray:
        return frequencies(self.coeffs.n, self.T)

    def __call__(self, t):
        return evaluate_pair(self, t)


def _basis(which: str) -> Callable[[np.ndarray], np.ndarray]:
    if which in ("C", "cos"):
        return np.cos
    if which in ("S", "sin"):
        return np.sin
    raise ValueError(f"selector must be 'C' or 'S', got {which!r}")


def evaluate_pair(pair: TrigPolyPair, t):
    """Evaluate ``(C(t), S(t))``; ``t`` may be a scalar or an array."""
    a = pair.coeffs.as_array()
    t_arr = np.asarray(t, dtype=float)
    phase = np.multiply.outer(t_arr, pair.freqs)
    C = np.cos(phase) @ a
    S = np.sin(phase) @ a
    if t_arr.ndim == 0:
        return float(C), float(S)
    return C, S


def _interior_grid(lo: float, hi: float, grid: int) -> np.ndarray:
    # endpoints are left out: S(0), S(pi) vanish identically and carry only rounding noise
    return lo + (hi - lo) * np.arange(1, grid + 1) / (grid + 1)


def sign_change_roots(
    rows: np.ndarray,
    freqs: np.ndarray,
    which: str,
    interval: tuple[float, float],
    grid: int = SIGN_GRID,
    xtol: float = ROOT_XTOL,
) -> list[np.ndarray]:
    """Sign changes of ``sum_j rows[r, j] * basis(freqs[j] t)`` for every row.

    Brackets come from a uniform grid; each bracket is refined by bisection
    (vectorized across all brackets of all rows).  Zeros where the polynomial
    touches zero without changing sign are not reported.
    """
    lo, hi = map(float, interval)
    if not lo < hi:
        raise ValueError("interval must satisfy lo < hi")
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    basis = _basis(which)
    freqs = np.asarray(freqs, dtype=float)
    t = _interior_grid(lo, hi, grid)
    vals = rows @ basis(np.outer(freqs, t))  # (m, grid)
    sgn = np.sign(vals)

    r_idx, c_idx = np.nonzero(sgn[:, :-1] * sgn[:, 1:] < 0)
    left = t[c_idx]
    right = t[c_idx + 1]
    left_sign = sgn[r_idx, c_idx]

    # exact zeros on a grid node flanked by opposite signs
    z_r, z_c = np.nonzero(sgn[:, 1:-1] == 0)
    z_c = z_c + 1
    keep = sgn[z_r, z_c - 1] * sgn[z_r, z_c + 1] < 0
    z_r, z_c = z_r[keep], z_c[keep]

    if left.size:
        width = right[0] - left[0]
        n_iter = max(1, int(np.ceil(np.log2(width / xtol))))
        coeff = rows[r_idx]
        for _ in range(n_iter):
            mid = 0.5 * (left + right)
            v = np.einsum("kj,kj->k", coeff, basis(np.multiply.outer(mid, freqs)))
            same = np.sign(v) == left_sign
            left = np.where(same, mid, left)
            right = np.where(same, right, mid)
        found = 0.5 * (left + right)
        # drop fake crossings produced by rounding noise at touching zeros
        probe = min(SIGN_PROBE, 0.25 * width)
        before = np.einsum("kj,kj->k", coeff, basis(np.multiply.outer(found - probe, freqs)))
        after = np.einsum("kj,kj->k", coeff, basis(np.multiply.outer(found + probe, freqs)))
        real = np.sign(before) != np.sign(after)
        found, r_idx = found[real], r_idx[real]
    else:
        found = left

    all_rows = np.concatenate([r_idx, z_r])
    all_roots = np.concatenate([found, t[z_c]])
    out: list[np.ndarray] = []
    order = np.lexsort((all_roots, all_rows))
    all_rows, all_roots = all_rows[order], all_roots[order]
    bounds = np.searchsorted(all_rows, np.arange(rows.shape[0] + 1))
    for r in range(rows.shape[0]):
        out.append(all_roots[bounds[r]:bounds[r + 1]])
    return out


def find_sign_changes(
    pair: TrigPolyPair,
    which: str,
    interval: tuple[float, float] = (0.0, np.pi),
    grid: int = SIGN_GRID,
) -> list[float]:
    """Sorted points in ``interval`` where ``C`` or ``S`` changes sign."""
    lo, hi = interval
    if lo < 0.0 or hi > np.pi + 1e-15:
        raise ValueError("interval must lie within [0, pi]")
    roots = sign_change_roots(pair.coeffs.as_array()[None, :], pair.freqs, which, interval, grid)[0]
    return [float(r) for r in roots]


# ---------------------------------------------------------------------------
# extremal objectives


def objective_t1(rows: np.ndarray, grid: int = SIGN_GRID) -> np.ndarray:
    """``min{C(t) : t in sign changes of S on (0, pi), or t = pi}`` per row (T = 1)."""
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    n = rows.shape[1]
    freqs = frequencies(n, 1)
    roots = sign_change_roots(rows, freqs, "S", (0.0, np.pi), grid)
    out = rows @ np.cos(np.pi * freqs)
    for r, tr in enumerate(roots):
        if tr.size:
            out[r] = min(out[r], float((np.cos(np.outer(tr, freqs)) @ rows[r]).min()))
    return out


def objective_t2(rows: np.ndarray, grid: int = SIGN_GRID) -> np.ndarray:
    """``max{|S(t)| : t in sign changes of C on (0, pi/2), or t = pi/2}`` per row (T = 2)."""
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    n = rows.shape[1]
    freqs = frequencies(n, 2)
    roots = sign_change_roots(rows, freqs, "C", (0.0, np.pi / 2), grid)
    out = np.abs(rows @ np.sin(0.5 * np.pi * freqs))
    for r, tr in enumerate(roots):
        if tr.size:
            out[r] = max(out[r], float(np.abs(np.sin(np.outer(tr, freqs)) @ rows[r]).max()))
    return out


def sine_quotient_coefficients(coeffs) -> np.ndarray:
    """Coefficients ``gamma_s`` with ``S(t)/sin t = gamma_1 + 2 sum_{s>=2} gamma_s cos((s-1)t)``.

    ``gamma_s`` is the sum of ``a_j`` over ``j >= s`` with ``j`` of the same parity as ``s``.
    """
    a = as_coefficients(coeffs)
    gamma = np.zeros_like(a)
    for s in range(len(a)):
        gamma[s] = a[s::2].sum()
    return gamma


# ---------------------------------------------------------------------------
# factorization


@dataclass(frozen=True)
class FactorizationResult:
    gamma: float
    zeros: tuple[float, ...]
    alpha: tuple[float, ...]

    @property
    def m(self) -> int:
        return len(self.zeros)

    def alpha_index(self) -> np.ndarray:
        """Frequencies ``m..n-m`` carried by ``alpha``."""
        return self.m + np.arange(len(self.alpha))

    def reconstruct(self, t):
        t = np.asarray(t, dtype=float)
        prod = np.ones_like(t)
        for tj in self.zeros:
            prod = prod * (np.cos(t) - np.cos(tj))
        k = self.alpha_index()
        alpha = np.array(self.alpha)
        C = self.gamma + prod * (np.cos(np.multiply.outer(t, k)) @ alpha)
        S = prod * (np.sin(np.multiply.outer(t, k)) @ alpha)
        return C, S

    def residual(self, coeffs, grid: int = 1024) -> float:
        """Sup-norm gap between the factored form and the direct sums."""
        a = as_coefficients(coeffs)
        t = np.linspace(0.0, 2 * np.pi, grid, endpoint=False)
        phase = np.multiply.outer(t, np.arange(1, len(a) + 1))
        C_rec, S_rec = self.reconstruct(t)
        return float(max(np.abs(np.cos(phase) @ a - C_rec).max(), np.abs(np.sin(phase) @ a - S_rec).max()))


def factorize(coeffs, zeros: Sequence[float], gamma: float, tol: float = 1e-8) -> FactorizationResult:
    """Factor out common zeros of ``S`` and ``C - gamma`` (T = 1 pair).

    ``F(z) = -gamma + sum_j a_j z**j`` is divided exactly by
    ``z**2 - 2 z cos t_j + 1`` for every supplied zero; the quotient scaled by
    ``2**m`` holds ``alpha_m..alpha_{n-m}`` with ``alpha_m = -2**m gamma``.
    Weights need not be normalized here.
    """
    a = as_coefficients(coeffs)
    n = len(a)
    zeros = tuple(float(z) for z in zeros)
    m = len(zeros)
    if m == 0:
        return FactorizationResult(float(gamma), (), tuple(float(v) for v in a))
    if 2 * m > n:
        raise FactorizationError(f"{m} zeros need at least {2 * m} weights, got {n}")
    if any(not 0.0 < z < np.pi for z in zeros):
        raise FactorizationError("zeros must lie in the open interval (0, pi)")
    if len(set(np.round(zeros, 12))) != m:
        raise FactorizationError("zeros must be distinct")

    pair_vals = np.exp(1j * np.outer(zeros, np.arange(1, n + 1))) @ a
    bad = np.abs(pair_vals - gamma)
    if bad.max() > tol:
        raise FactorizationError(
            f"S(t_j) = 0 and C(t_j) = gamma violated (max deviation {bad.max():.3e})"
        )

    # numpy.polydiv wants highest degree first
    F = np.concatenate([a[::-1], [-gamma]])
    scale = max(1.0, np.abs(F).max())
    for tj in zeros:
        F, rem = np.polydiv(F, np.array([1.0, -2.0 * np.cos(tj), 1.0]))
        if np.abs(rem).max() > tol * scale:
            raise FactorizationError(f"division by the factor of t = {tj!r} left remainder {np.abs(rem).max():.3e}")
    alpha = (2.0 ** m) * F[::-1]
    return FactorizationResult(float(gamma), zeros, tuple(float(v) for v in alpha))


# ---------------------------------------------------------------------------
# Fejer kernels


def fejer_kernel(n: int, kind: int, t):
    """Fejer kernels ``Phi_n^(1)`` and ``Phi_n^(2)``.

    Near the removable singularities the squared-modulus/cosine-sum form of
    the same kernel is used instead of the quotient.
    """
    if n < 1:
        raise ValueError("kernel order must be >= 1")
    t_arr = np.asarray(t, dtype=float)
    if kind == 1:
        theta = np.pi / (n + 2)
        den = np.cos(t_arr) - np.cos(theta)
        small = np.abs(den) < KERNEL_SINGULAR_BAND
        safe = np.where(small, 1.0, den)
        direct = (np.cos(0.5 * (n + 2) * t_arr) / safe) ** 2
        k = np.arange(n + 1)
        series = np.abs(np.exp(1j * np.multiply.outer(t_arr, k)) @ np.sin((k + 1) * theta)) ** 2 / np.sin(theta) ** 2
    elif kind == 2:
        den = np.sin(0.5 * t_arr)
        small = np.abs(den) < KERNEL_SINGULAR_BAND
        safe = np.where(small, 1.0, den)
        direct = (np.sin(0.5 * (n + 1) * t_arr) / safe) ** 2
        j = np.arange(1, n + 1)
        series = (n + 1) + 2.0 * (np.cos(np.multiply.outer(t_arr, j)) @ (n + 1 - j).astype(float))
    else:
        raise ValueError("kernel kind must be 1 or 2")
    out = np.where(small, series, direct)
    return float(out) if t_arr.ndim == 0 else out


# ---------------------------------------------------------------------------
# classical multiplicative identities


def _node_product(t: np.ndarray, nodes: np.ndarray) -> np.ndarray:
    return (np.cos(t)[:, None] - np.cos(nodes)[None, :]).prod(axis=1)


def _sum(t, weights, freqs, basis):
    return basis(np.outer(t, freqs)) @ np.asarray(weights, dtype=float)


def _identity_sides(tag: str, m: int, t: np.ndarray):
    j = np.arange(1, m + 1)
    even_nodes = np.pi * j / (m + 1)
    if tag == "dirichlet-even-sin":
        return _sum(t, np.ones(m), 2 * j, np.sin), 2.0**m * _node_product(t, even_nodes) * np.sin(m * t)
    if tag == "dirichlet-even-cos":
        return _sum(t, np.ones(m), 2 * j, np.cos), -1.0 + 2.0**m * _node_product(t, even_nodes) * np.cos(m * t)
    if tag in ("dirichlet-odd-sin", "dirichlet-odd-cos"):
        basis = np.sin if tag.endswith("sin") else np.cos
        k = np.arange(1, 2 * m + 2)
        lhs = _sum(t, np.ones(2 * m + 1), k, basis)
        rhs = 2.0**m * _node_product(t, even_nodes) * (basis(m * t) + basis((m + 1) * t))
        return lhs, rhs if basis is np.sin else rhs - 1.0
    if tag in ("dirichlet-2m-sin", "dirichlet-2m-cos"):
        basis = np.sin if tag.endswith("sin") else np.cos
        k = np.arange(1, 2 * m + 1)
        lhs = _sum(t, np.ones(2 * m), k, basis)
        rhs = 2.0**m * _node_product(t, 2 * np.pi * j / (2 * m + 1)) * basis(m * t)
        return lhs, rhs if basis is np.sin else rhs - 1.0
    if tag in ("binomial-sin", "binomial-cos"):
        basis = np.sin if tag.endswith("sin") else np.cos
        w = [comb(m, i) for i in j]
        rhs = 2.0**m * np.cos(t) ** m * basis(m * t)
        return _sum(t, w, 2 * j, basis), rhs if basis is np.sin else rhs - 1.0
    if tag in ("binomial-alt-sin", "binomial-alt-cos"):
        basis = np.sin if tag.endswith("sin") else np.cos
        k = np.arange(0, 2 * m + 1)
        w = [(-1) ** (i + m) * comb(2 * m, i) for i in k]
        return _sum(t, w, k, basis), 2.0**m * (1 - np.cos(t)) ** m * basis(m * t)
    raise ValueError(f"unknown identity tag {tag!r}")


IDENTITY_TAGS = (
    "dirichlet-even-sin",
    "dirichlet-even-cos",
    "dirichlet-odd-sin",
    "dirichlet-odd-cos",
    "binomial-sin",
    "binomial-cos",
    "product-constant",
)
EXTRA_IDENTITY_TAGS = (
    "dirichlet-2m-sin",
    "dirichlet-2m-cos",
    "binomial-alt-sin",
    "binomial-alt-cos",
)


def identity_scale(tag: str, m: int) -> float:
    """Sum of absolute coefficients on the left side; a natural residual scale."""
    if tag.startswith("binomial-alt"):
        return 4.0**m
    if tag.startswith("binomial"):
        return 2.0**m - 1.0
    if tag == "product-constant":
        return 1.0
    return float(2 * m + 1)


def verify_identity(tag: str, m: int, grid: int = IDENTITY_GRID) -> float:
    """Sup-norm residual of a named multiplicative identity at order ``m``."""
    if m < 1:
        raise ValueError("identity order m must be >= 1")
    if tag == "product-constant":
        j = np.arange(1, m + 1)
        return float(abs(np.prod(1.0 - np.cos(np.pi * j / (m + 1))) - (m + 1) / 2.0**m))
    if tag not in IDENTITY_TAGS + EXTRA_IDENTITY_TAGS:
        raise ValueError(f"unknown identity tag {tag!r}")
    t = np.linspace(0.0, 2 * np.pi, grid, endpoint=False)
    lhs, rhs = _identity_sides(tag, m, t)
    return float(np.abs(lhs - rhs).max())
