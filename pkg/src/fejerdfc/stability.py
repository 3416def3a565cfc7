"""Characteristic polynomials, Schur stability, margins and multiplier regions."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .trigpoly import CoefficientVector, as_coefficients

LEAD_FLOOR = 1e-300
AMBIGUITY_BAND = 1e-8
MARGIN_RTOL = 1e-10
MARGIN_CAP = 1e12
WINDING_SAMPLES = 8192
ORIGIN_EXCLUSION = 1e-12
SIGN_PROBE = 1e-5


class DegeneratePolynomialError(ValueError):
    """Leading coefficient vanishes to working precision."""


@dataclass(frozen=True)
class CharPoly:
    """``lambda**(T(n-1)) * (lambda - mu p(1/lambda)**T)``, highest power first."""

    coeffs: np.ndarray
    a: CoefficientVector
    T: int
    mu: float

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def roots(self) -> np.ndarray:
        return np.roots(self.coeffs)

    def max_root_modulus(self) -> float:
        r = self.roots()
        return float(np.abs(r).max()) if r.size else 0.0


def _power_weights(a: np.ndarray, T: int) -> np.ndarray:
    """Ascending coefficients of ``p(w)**T``."""
    out = np.array([1.0])
    for _ in range(T):
        out = np.convolve(out, a)
    return out


def build_char_poly(a, T: int, mu: float) -> CharPoly:
    if int(T) != T or T < 1:
        raise ValueError("cycle length T must be a positive integer")
    if not isinstance(a, CoefficientVector):
        a = CoefficientVector(tuple(as_coefficients(a)))
    c = _power_weights(a.as_array(), T)
    coeffs = np.concatenate([[1.0], -mu * c])
    return CharPoly(coeffs, a, int(T), float(mu))


# ---------------------------------------------------------------------------
# Schur stability


def _schur_cohn(desc: np.ndarray) -> tuple[bool, float]:
    """Schur-Cohn reduction on descending coefficients.

    Returns the verdict and the smallest relative gap ``1 - |c0|/|lead|``
    met on the way, which measures how close the decision was.
    """
    p = np.asarray(desc, dtype=complex)
    closest = 1.0
    while len(p) > 1:
        lead, const = p[0], p[-1]
        if abs(lead) <= abs(const):
            return False, abs(1.0 - abs(const) / abs(lead)) if abs(lead) > 0 else 0.0
        closest = min(closest, 1.0 - abs(const) / abs(lead))
        # drop the top degree: conj(lead) p - const reversed(conj p), divided by z
        q = np.conj(lead) * p - const * np.conj(p[::-1])
        p = q[:-1]
        p = p / np.abs(p).max()
    return True, closest


def is_schur_stable(poly, tol: float = 1e-9) -> bool:
    """All roots strictly inside the disc of radius ``1 - tol``.

    Accepts a :class:`CharPoly` or descending coefficients.  Decisions that
    fall within a narrow band of the threshold are settled from companion
    matrix eigenvalues instead.
    """
    arr = np.asarray(poly.coeffs if isinstance(poly, CharPoly) else poly, dtype=complex)
    if arr.size == 0 or abs(arr[0]) < LEAD_FLOOR:
        raise DegeneratePolynomialError("leading coefficient below 1e-300")
    if arr.size == 1:
        return True
    r = 1.0 - tol
    deg = arr.size - 1
    scaled = arr * r ** np.arange(deg, -1, -1)  # roots of scaled are roots/r
    with np.errstate(over="ignore", invalid="ignore"):
        ok, gap = _schur_cohn(scaled)
    if not np.isfinite(gap) or gap < AMBIGUITY_BAND:
        return bool(np.all(np.abs(np.roots(arr)) < r))
    return ok


def companion_stable(poly, tol: float = 1e-9) -> bool:
    arr = np.asarray(poly.coeffs if isinstance(poly, CharPoly) else poly, dtype=complex)
    return bool(np.all(np.abs(np.roots(arr)) < 1.0 - tol))


def schur_cohn_stable(poly, tol: float = 1e-9) -> bool:
    """Recursion verdict alone, without the eigenvalue fallback."""
    arr = np.asarray(poly.coeffs if isinstance(poly, CharPoly) else poly, dtype=complex)
    r = 1.0 - tol
    return _schur_cohn(arr * r ** np.arange(arr.size - 1, -1, -1))[0]


# ---------------------------------------------------------------------------
# margins


def mu_margin(a, T: int, tol: float = 1e-12, rtol: float = MARGIN_RTOL) -> float:
    """First exit ``M`` of the closed loop along ``mu in (-M, 0)``.

    Doubles ``M`` from ``1e-6`` until the loop is unstable, then bisects.
    Returns ``inf`` if no exit is found below ``1e12``.
    """
    def stable(M: float) -> bool:
        return is_schur_stable(build_char_poly(a, T, -M), tol=tol)

    lo, hi = 0.0, 1e-6
    while stable(hi):
        lo, hi = hi, 2.0 * hi
        if hi > MARGIN_CAP:
            return float("inf")
    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        if stable(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def boundary_curve(a, T: int, samples: int = 4096) -> tuple[np.ndarray, np.ndarray]:
    """``(omega, z)`` with ``z = exp(i omega) p(exp(i omega))**T`` on ``[0, 2 pi)``."""
    if samples < 16:
        raise ValueError("samples must be at least 16")
    arr = as_coefficients(a)
    # exact grid symmetry: omega_k and omega_{N-k} are mirror images
    k = np.arange(samples)
    omega = 2.0 * np.pi * k / samples
    z = np.exp(1j * omega)
    p = np.polyval(arr[::-1], z)
    w = z * p**T
    mirror = (samples - k[1:]) % samples
    half = k[1:] > samples // 2
    w[1:][half] = np.conj(w[mirror[half]])
    if samples % 2 == 0:
        w[samples // 2] = w[samples // 2].real
    w[0] = w[0].real
    return omega, w


def _curve_values(a: np.ndarray, T: int, omega: np.ndarray) -> np.ndarray:
    z = np.exp(1j * omega)
    return z * np.polyval(a[::-1], z) ** T


def negative_axis_crossings(a, T: int, grid: int = 8192) -> np.ndarray:
    """Real parts where the curve crosses the negative real axis on ``(0, pi]``."""
    arr = as_coefficients(a)
    omega = np.pi * np.arange(1, grid + 1) / (grid + 1)
    im = _curve_values(arr, T, omega).imag
    idx = np.nonzero(np.sign(im[:-1]) * np.sign(im[1:]) < 0)[0]
    lo, hi = omega[idx], omega[idx + 1]
    s_lo = np.sign(im[idx])
    for _ in range(45):
        mid = 0.5 * (lo + hi)
        same = np.sign(_curve_values(arr, T, mid).imag) == s_lo
        lo, hi = np.where(same, mid, lo), np.where(same, hi, mid)
    roots = 0.5 * (lo + hi)
    # a tangency can fake a crossing through rounding noise; require a real sign flip
    flip = np.sign(_curve_values(arr, T, roots - SIGN_PROBE).imag) != np.sign(_curve_values(arr, T, roots + SIGN_PROBE).imag)
    roots = roots[flip]
    re = np.concatenate([_curve_values(arr, T, roots).real, [_curve_values(arr, T, np.array([np.pi]))[0].real]])
    return re[re < 0]


def curve_margin(a, T: int, grid: int = 8192) -> float:
    """Margin read off the curve: ``1 / max |Re|`` over negative-axis crossings."""
    re = negative_axis_crossings(a, T, grid)
    if re.size == 0:
        return float("inf")
    return float(1.0 / np.abs(re).max())


# ---------------------------------------------------------------------------
# regions and winding numbers


def winding_number(curve: np.ndarray, point: complex) -> int:
    """Winding number of a closed sampled curve around ``point``."""
    d = np.asarray(curve, dtype=complex) - point
    ang = np.angle(np.concatenate([d, d[:1]]))
    total = np.diff(np.unwrap(ang)).sum()
    return int(np.rint(total / (2 * np.pi)))


@dataclass(frozen=True)
class MultiplierRegion:
    """Inverted boundary curve ``1/z`` and a membership test for real multipliers."""

    a: CoefficientVector
    T: int
    omega: np.ndarray
    curve: np.ndarray
    boundary: np.ndarray

    def contains(self, mu: complex) -> bool:
        """Closed loop stable at ``mu`` iff the curve does not wind around ``1/mu``."""
        if mu == 0:
            return True
        return winding_number(self.curve, 1.0 / mu) == 0


def multiplier_region(a, T: int, samples: int = 4096) -> MultiplierRegion:
    if not isinstance(a, CoefficientVector):
        a = CoefficientVector(tuple(as_coefficients(a)))
    omega, curve = boundary_curve(a, T, samples)
    keep = np.abs(curve) > ORIGIN_EXCLUSION
    boundary = 1.0 / curve[keep]
    return MultiplierRegion(a, int(T), omega[keep], curve, boundary)


def region_axis_clearance(region: MultiplierRegion, lo: float, hi: float) -> float:
    """Smallest distance from the region boundary to the real segment ``[lo, hi]``."""
    b = region.boundary
    x = np.clip(b.real, lo, hi)
    return float(np.hypot(b.real - x, b.imag).min())


@dataclass(frozen=True)
class StabilityReport:
    mu_o: float
    max_root_modulus_inside: float
    max_root_modulus_outside: float
    curve_margin: float
    boundary_curve: np.ndarray
    region_inversion: np.ndarray


def stability_report(a, T: int, samples: int = 4096) -> StabilityReport:
    mu_o = mu_margin(a, T)
    region = multiplier_region(a, T, samples)
    inside = build_char_poly(a, T, -mu_o * (1 - 1e-6)).max_root_modulus()
    outside = build_char_poly(a, T, -mu_o * (1 + 1e-3)).max_root_modulus()
    return StabilityReport(mu_o, inside, outside, curve_margin(a, T), region.curve, region.boundary)


# ---------------------------------------------------------------------------
# covering discs


def _poly_eval(coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    # coeffs[j-1] multiplies z**j
    return z * np.polyval(coeffs[::-1], z)


def is_attained(coeffs, gamma: complex, samples: int = WINDING_SAMPLES, tol: float = 1e-9) -> bool:
    """Whether ``F(z) = gamma`` has a root in the open unit disc, ``F(0) = 0``."""
    c = np.asarray(coeffs, dtype=complex)
    scale = np.abs(c).sum() + abs(gamma)
    # gamma on the image of the circle: the open disc is what counts, so shrink
    # the contour until F - gamma is resolvable above rounding noise
    for shrink in (0.0, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2):
        count = _winding(c, gamma, 1.0 - shrink, samples, floor=tol if shrink == 0 else 1e-6 * scale)
        if count is not None:
            return count > 0
    return False


def _winding(c: np.ndarray, gamma: complex, radius: float, samples: int, floor: float) -> int | None:
    N = samples
    while True:
        z = radius * np.exp(2j * np.pi * np.arange(N) / N)
        d = _poly_eval(c, z) - gamma
        if np.abs(d).min() <= floor:
            return None
        steps = np.angle(np.roll(d, -1) / d)
        if np.abs(steps).max() <= np.pi / 4 or N >= 1 << 20:
            return int(np.rint(steps.sum() / (2 * np.pi)))
        N *= 4


def covering_radius(coeffs, stronger: bool = False) -> float:
    c = np.asarray(coeffs, dtype=complex)
    n = len(c)
    return float(np.abs(c).sum() / ((2.0**n - 1.0) if stronger else 2.0**n))


def coverage_radius_check(coeffs, probes: int = 64, radius: float | None = None) -> bool:
    """All ``probes`` points on the covering circle are values of ``F`` on the disc."""
    c = np.asarray(coeffs, dtype=complex)
    if not np.any(c):
        raise ValueError("coefficients must not all vanish")
    r = covering_radius(c) if radius is None else radius
    gammas = r * np.exp(2j * np.pi * np.arange(probes) / probes)
    return all(is_attained(c, g) for g in gammas)


@dataclass(frozen=True)
class CoverageReport:
    stated: bool
    stronger: bool


def coverage_report(coeffs, probes: int = 64) -> CoverageReport:
    c = np.asarray(coeffs, dtype=complex)
    return CoverageReport(
        coverage_radius_check(c, probes),
        coverage_radius_check(c, probes, covering_radius(c, stronger=True)),
    )


def sharpness_witness(n: int) -> np.ndarray:
    """Coefficients of ``(z + 1)**n - 1``."""
    return np.array([comb(n, j) for j in range(1, n + 1)], dtype=complex)


def sharpness_check(n: int, delta: float = 0.01) -> bool:
    """True when ``(z+1)**n - 1`` misses a point of the enlarged disc.

    The missed point is ``-1`` itself, which lies inside radius
    ``(1 + delta) sum|a_j| / (2**n - 1) = 1 + delta``.
    """
    c = sharpness_witness(n)
    r = (1.0 + delta) * np.abs(c).sum() / (2.0**n - 1.0)
    gamma = -1.0 + 0j
    return abs(gamma) < r and not is_attained(c, gamma)


# ---------------------------------------------------------------------------
# geometry of boundary curves


def self_intersections(curve: np.ndarray, tol: float = 1e-7, mirror_tol: int = 2) -> list[tuple[int, int]]:
    """Pairs of non-adjacent segments closer than ``tol``.

    Pairs ``(i, j)`` with ``i + j`` close to ``N`` are mirror images under
    conjugation; they meet on the real axis by symmetry and are skipped.
    So are pairs whose connecting arc is a sliver thinner than ``tol``
    (the two flanks of a cusp), which enclose no area.
    """
    from shapely import STRtree, LineString

    pts = np.asarray(curve, dtype=complex)
    N = len(pts)
    segs = [LineString([(pts[i].real, pts[i].imag), (pts[(i + 1) % N].real, pts[(i + 1) % N].imag)]) for i in range(N)]
    tree = STRtree(segs)
    left, right = tree.query(segs, predicate="dwithin", distance=tol)
    hits = []
    for i, j in zip(left.tolist(), right.tolist()):
        if j <= i:
            continue
        gap = min(j - i, N - (j - i))
        if gap <= 1:
            continue
        s = (i + j + 1) % N
        if min(s, N - s) <= mirror_tol:
            continue
        if _sliver(pts, i, j, tol):
            continue
        hits.append((i, j))
    return hits


def _sliver(pts: np.ndarray, i: int, j: int, tol: float) -> bool:
    N = len(pts)
    idx = np.arange(i, j + 2) % N if j - i <= N // 2 else np.arange(j, i + N + 2) % N
    loop = pts[idx]
    area = 0.5 * abs(np.sum(loop.real * np.roll(loop.imag, -1) - np.roll(loop.real, -1) * loop.imag))
    perimeter = np.abs(np.diff(np.concatenate([loop, loop[:1]]))).sum()
    return area < tol * perimeter
