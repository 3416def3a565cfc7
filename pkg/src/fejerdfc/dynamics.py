"""One-dimensional maps, closed-loop simulation and cycle detection."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from math import sqrt
from typing import Callable

import numpy as np

from .coeffs import ControlConfig

OVERFLOW = 1e12
FD_STEP = 1e-6
KINK_TOL = 1e-9
RECURSION_TOL = 1e-8

Array = np.ndarray


class DivergenceError(RuntimeError):
    """A state left the working range ``|x| <= 1e12``."""


@dataclass(frozen=True)
class MapSpec:
    """A scalar map together with its derivative.

    ``f`` and ``df`` act elementwise on numpy arrays.  ``power`` records how
    many times ``base`` is composed to give ``f``.
    """

    family: str
    params: dict
    f: Callable[[Array], Array] = field(repr=False)
    df: Callable[[Array], Array] = field(repr=False)
    domain: tuple[float, float] = (-np.inf, np.inf)
    power: int = 1
    kink: float | None = None
    base: "MapSpec | None" = field(default=None, repr=False)

    @property
    def base_map(self) -> "MapSpec":
        return self.base if self.base is not None else self

    def __call__(self, x):
        return self.f(x)


def logistic(h: float) -> MapSpec:
    """``f(x) = h x (1 - x)`` on ``[0, 1]``."""
    if not 0.0 <= h <= 4.0:
        raise ValueError("logistic parameter h must lie in [0, 4]")
    return MapSpec(
        "logistic",
        {"h": float(h)},
        lambda x: h * x * (1.0 - x),
        lambda x: h * (1.0 - 2.0 * x),
        (0.0, 1.0),
    )


def soc(ha: float) -> MapSpec:
    """Piecewise-linear map ``ha/2 - ha |x - 1/2| + x``.

    The derivative at the kink ``x = 1/2`` is the right derivative.
    """
    if not -1.0 <= ha <= 1.0 + sqrt(2.0):
        raise ValueError("soc parameter ha must lie in [-1, 1 + sqrt(2)]")
    # [0, (1 + ha)/2] is forward invariant for 0 < ha <= 1 + sqrt 2
    domain = (0.0, 0.5 * (1.0 + ha)) if ha > 0 else (0.0, 1.0)
    return MapSpec(
        "soc",
        {"ha": float(ha)},
        lambda x: 0.5 * ha - ha * np.abs(x - 0.5) + x,
        lambda x: np.where(np.asarray(x) >= 0.5, 1.0 - ha, 1.0 + ha),
        domain,
        kink=0.5,
    )


def custom(f: Callable, df: Callable | None = None, domain=(-np.inf, np.inf), name: str = "custom") -> MapSpec:
    """Wrap a user map; the derivative defaults to a central difference."""
    if df is None:
        def df(x):
            x = np.asarray(x, dtype=float)
            return (f(x + FD_STEP) - f(x - FD_STEP)) / (2 * FD_STEP)
    return MapSpec("custom", {"name": name}, f, df, tuple(domain))


def _guard(x):
    with np.errstate(invalid="ignore"):
        if np.any(~np.isfinite(x)) or np.any(np.abs(x) > OVERFLOW):
            raise DivergenceError("state exceeded 1e12 in magnitude")
    return x


def iterate_map(spec: MapSpec, m: int) -> MapSpec:
    """The ``m``-fold composition with its chain-rule derivative."""
    if int(m) != m or m < 1:
        raise ValueError("iterate power m must be a positive integer")
    base = spec.base_map
    total = spec.power * int(m)
    if total == 1:
        return base

    def f(x):
        for _ in range(total):
            x = _guard(base.f(x))
        return x

    def df(x):
        d = np.ones_like(np.asarray(x, dtype=float))
        for _ in range(total):
            d = d * base.df(x)
            x = _guard(base.f(x))
        return d

    return replace(base, f=f, df=df, power=total, base=base)


def orbit(spec: MapSpec, x: float, length: int) -> np.ndarray:
    out = np.empty(length)
    for i in range(length):
        out[i] = x
        x = float(spec.f(x))
    return out


# ---------------------------------------------------------------------------
# simulation


@dataclass(frozen=True)
class Trajectory:
    """States ``x_0..x_K`` and controls ``u_k = x_{k+1} - f(x_k)`` for ``k < K``."""

    x: np.ndarray
    u: np.ndarray
    config: ControlConfig
    map: MapSpec

    @property
    def power(self) -> int:
        return self.map.power

    def recursion_residual(self) -> float:
        """Largest violation of the closed-loop weighted recursion after the prehistory."""
        a, T, D = self.config.a.as_array(), self.config.T, self.config.prehistory_depth
        fx = self.map.f(self.x)
        K = len(self.x) - 1
        if K <= D:
            return 0.0
        k = np.arange(D, K)
        lagged = np.stack([fx[k - j * T] for j in range(len(a))], axis=1)
        return float(np.abs(self.x[k + 1] - lagged @ a).max())

    def control_residual(self) -> float:
        return float(np.abs(self.u - (self.x[1:] - self.map.f(self.x[:-1]))).max())


def dfc_control(config: ControlConfig, fvals: np.ndarray) -> np.ndarray:
    """``u = -sum_j eps_j (f(x_{k-(j-1)T}) - f(x_{k-jT}))``.

    ``fvals[..., i]`` holds ``f(x_{k-i})`` for ``i = 0..(n-1)T``.
    """
    T = config.T
    u = np.zeros(fvals.shape[:-1])
    for j, e in enumerate(config.eps_strength, start=1):
        u = u - e * (fvals[..., (j - 1) * T] - fvals[..., j * T])
    return u


def simulate_batch(
    spec: MapSpec,
    config: ControlConfig,
    x0,
    steps: int,
    form: str = "weights",
    raise_on_divergence: bool = False,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Simulate many initial points at once.

    Returns ``(x, u, diverged)`` with ``x`` of shape ``(trials, steps + 1)``.
    The first ``(n-1)T + 1`` states are produced by the uncontrolled map.
    Diverged rows are filled with ``nan`` from the offending step on.
    """
    if steps < 1:
        raise ValueError("steps must be at least 1")
    if form not in ("weights", "control"):
        raise ValueError("form must be 'weights' or 'control'")
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    m = x0.size
    a = config.a.as_array()
    T, D = config.T, config.prehistory_depth
    lags = T * np.arange(len(a))
    x = np.empty((m, steps + 1))
    fx = np.empty((m, steps + 1))
    u = np.zeros((m, steps))
    diverged = np.zeros(m, dtype=bool)
    x[:, 0] = x0
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(steps):
            xk = x[:, k]
            try:
                fx[:, k] = spec.f(xk)
            except DivergenceError:
                fx[:, k] = _safe_eval(spec.f, xk)
            if k < D:
                nxt = fx[:, k]
            elif form == "weights":
                nxt = fx[:, k - lags] @ a
                u[:, k] = nxt - fx[:, k]
            else:
                window = fx[:, k - np.arange(D + 1)]
                u[:, k] = dfc_control(config, window)
                nxt = fx[:, k] + u[:, k]
            bad = ~np.isfinite(nxt) | (np.abs(nxt) > OVERFLOW)
            if bad.any():
                if raise_on_divergence:
                    raise DivergenceError(f"state exceeded 1e12 in magnitude at step {k + 1}")
                nxt = np.where(bad, np.nan, nxt)
                diverged |= bad
            x[:, k + 1] = nxt
    return x, u, diverged


def _safe_eval(f, xs: np.ndarray) -> np.ndarray:
    out = np.empty_like(xs)
    for i, v in enumerate(xs):
        try:
            out[i] = f(v) if np.isfinite(v) else np.nan
        except DivergenceError:
            out[i] = np.nan
    return out


def simulate(
    spec: MapSpec,
    config: ControlConfig,
    x0: float,
    steps: int,
    form: str = "weights",
) -> Trajectory:
    """Closed-loop trajectory from ``x0``; raises :class:`DivergenceError`."""
    lo, hi = spec.domain
    if not lo <= x0 <= hi:
        raise ValueError(f"x0={x0} lies outside the map domain {spec.domain}")
    x, u, _ = simulate_batch(spec, config, [x0], steps, form=form, raise_on_divergence=True)
    return Trajectory(x[0], u[0], config, spec)


# ---------------------------------------------------------------------------
# cycles


@dataclass(frozen=True)
class CycleReport:
    """A periodic orbit of the simulated map (possibly an iterate of the base map).

    ``multiplier`` is the product of base-map derivatives along the orbit,
    i.e. the multiplier of the orbit as a cycle of the simulated map.
    """

    period: int
    points: tuple[float, ...]
    multiplier: float
    converged: bool
    residual: float
    trials: tuple[int, ...] = ()
    kink_hit: bool = False

    def rotated(self, shift: int) -> "CycleReport":
        pts = self.points[shift:] + self.points[:shift]
        return replace(self, points=pts)


def _polish(spec: MapSpec, x: float, period: int, iters: int = 60) -> tuple[float, float]:
    """Newton iteration on ``g^P(x) = x``; returns the point and final residual."""
    gP = iterate_map(spec, period) if period > 1 else spec
    best, best_res = x, abs(float(gP.f(x)) - x)
    for _ in range(iters):
        try:
            val = float(gP.f(x))
            slope = float(gP.df(x)) - 1.0
        except DivergenceError:
            break
        if slope == 0.0 or not np.isfinite(slope):
            break
        x_new = x - (val - x) / slope
        res = abs(float(gP.f(x_new)) - x_new)
        if res < best_res:
            best, best_res = x_new, res
        if abs(x_new - x) < 1e-15 * max(1.0, abs(x)):
            break
        x = x_new
    return best, best_res


def _minimal_period(tail: np.ndarray, max_period: int, tol: float) -> int:
    for P in range(1, max_period + 1):
        if len(tail) <= 2 * P:
            break
        if np.max(np.abs(tail[P:] - tail[:-P])) < tol:
            return P
    return 0


def _set_distance(a: tuple[float, ...], b: tuple[float, ...]) -> float:
    A, B = np.array(a)[:, None], np.array(b)[None, :]
    d = np.abs(A - B)
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def cycle_from_point(spec: MapSpec, x: float, period: int) -> CycleReport:
    """Polish ``x`` onto a ``period``-cycle of ``spec`` and measure it."""
    x, res = _polish(spec, x, period)
    pts = orbit(spec, x, period)
    base = spec.base_map
    base_orbit = orbit(base, x, period * spec.power + 1)
    residual = max(res, abs(base_orbit[-1] - base_orbit[0]))
    mult = float(np.prod(base.df(base_orbit[:-1])))
    kink_hit = base.kink is not None and bool(np.any(np.abs(base_orbit - base.kink) < KINK_TOL))
    return CycleReport(period, tuple(float(p) for p in pts), mult, residual < RECURSION_TOL, float(residual), (), kink_hit)


def detect_cycles(
    spec: MapSpec,
    config: ControlConfig,
    trials: int,
    seed: int,
    max_period: int,
    transient: int = 10_000,
    tol: float = 1e-6,
    dedup_tol: float = 1e-4,
    window: int | None = None,
    x0_range: tuple[float, float] | None = None,
) -> list[CycleReport]:
    """Hunt for cycles stabilized by ``config`` from random initial points.

    Converged trials are merged into distinct cycles (by point-set distance);
    every trial that does not settle yields its own report with
    ``converged=False``.  Reports are ordered by their first trial index.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = np.random.default_rng(seed)
    if x0_range is None:
        lo, hi = spec.domain
        if not (np.isfinite(lo) and np.isfinite(hi)):
            lo, hi = -1.0, 1.0
        pad = 0.05 * (hi - lo)
        x0_range = (lo + pad, hi - pad)
    x0 = rng.uniform(*x0_range, size=trials)
    window = window or max(4 * max_period, 64)
    x, _, diverged = simulate_batch(spec, config, x0, transient + window)
    tails = x[:, -window:]

    found: list[CycleReport] = []
    failed: list[CycleReport] = []
    for i in range(trials):
        tail = tails[i]
        P = 0 if diverged[i] or not np.all(np.isfinite(tail)) else _minimal_period(tail, max_period, tol)
        if P == 0:
            last = float(tail[-1]) if np.isfinite(tail[-1]) else float("nan")
            failed.append(CycleReport(0, (last,), float("nan"), False, float("inf"), (i,)))
            continue
        rep = cycle_from_point(spec, float(tail[-1]), P)
        if not rep.converged:
            failed.append(replace(rep, trials=(i,)))
            continue
        for k, other in enumerate(found):
            if other.period == rep.period and _set_distance(other.points, rep.points) < dedup_tol:
                found[k] = replace(other, trials=other.trials + (i,))
                break
        else:
            found.append(replace(rep, trials=(i,)))
    return sorted(found + failed, key=lambda r: r.trials[0])


@dataclass(frozen=True)
class Classification:
    label: str  # genuine-T-cycle, divisor-cycle, equilibrium or unrelated
    base_period: int
    base_points: tuple[float, ...]
    base_multiplier: float


def base_period(base: MapSpec, x: float, limit: int, tol: float = 1e-7) -> int:
    """Smallest ``q <= limit`` with ``f^q(x) = x`` on the base map, else 0."""
    pts = orbit(base, x, limit + 1)
    for q in range(1, limit + 1):
        if abs(pts[q] - pts[0]) < tol:
            return q
    return 0


def classify_detected(report: CycleReport, base_map: MapSpec, claimed_period: int) -> Classification:
    """Label a converged report by its minimal period on the base map."""
    if not report.converged:
        raise ValueError("only converged reports can be classified")
    base = base_map.base_map
    x = report.points[0]
    q = base_period(base, x, max(claimed_period, len(report.points) * max(1, report.period)) * 2)
    pts = tuple(float(v) for v in orbit(base, x, q)) if q else ()
    mult = float(np.prod(base.df(np.array(pts)))) if q else float("nan")
    if q == 1:
        label = "equilibrium"
    elif q == claimed_period:
        label = "genuine-T-cycle"
    elif q and claimed_period % q == 0:
        label = "divisor-cycle"
    else:
        label = "unrelated"
    return Classification(label, q, pts, mult)
