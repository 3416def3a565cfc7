"""Verification suites run by ``fejerdfc verify``."""

from __future__ import annotations

from dataclasses import dataclass
from math import pi, tan

import numpy as np

from . import coeffs as cf
from . import oracle, stability, trigpoly
from .export import Settings


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    threshold: float
    passed: bool


def _le(name: str, value: float, threshold: float) -> Check:
    return Check(name, float(value), float(threshold), bool(value <= threshold))


def identities(settings: Settings = Settings()) -> list[Check]:
    out = []
    for tag in trigpoly.IDENTITY_TAGS:
        for m in range(1, 13):
            out.append(_le(f"{tag}[m={m}]", trigpoly.verify_identity(tag, m), 1e-9))
    for tag in trigpoly.EXTRA_IDENTITY_TAGS:
        for m in range(1, 13):
            res = trigpoly.verify_identity(tag, m) / trigpoly.identity_scale(tag, m)
            out.append(_le(f"{tag}[m={m}] (relative)", res, 1e-12))
    return out


def kernels(settings: Settings = Settings()) -> list[Check]:
    out = []
    for n in range(2, 13):
        out.append(_le(f"kernel-t1[n={n}]", cf.kernel_relation_t1(n), 1e-9))
        out.append(_le(f"kernel-t2[n={n}]", cf.kernel_relation_t2(n), 1e-9))
        out.append(_le(f"suffridge-t1[n={n}]", cf.suffridge_relation_t1(n), 1e-12))
        out.append(_le(f"suffridge-t2[n={n}]", cf.suffridge_relation_t2(n), 1e-12))
        out.append(_le(f"fejer-gamma[n={n}]", -cf.fejer_gamma_gap(n), 1e-12))
    t = np.linspace(0.0, 2 * pi, 4096, endpoint=False)
    for n in range(1, 21):
        low = min(trigpoly.fejer_kernel(n, 1, t).min(), trigpoly.fejer_kernel(n, 2, t).min())
        out.append(_le(f"kernel-nonnegative[n={n}]", -low, 1e-12))
    return out


def extremal(settings: Settings = Settings()) -> list[Check]:
    out = []
    for T in (1, 2):
        for n in range(1, 11):
            rel = abs(stability.mu_margin(cf.optimal_coeffs(T, n), T) / cf.mu_bound(T, n) - 1.0)
            out.append(_le(f"margin[T={T},n={n}]", rel, 1e-6))
    for n in range(1, 13):
        v1 = trigpoly.objective_t1(cf.optimal_coeffs_t1(n).as_array())[0]
        out.append(_le(f"objective-t1[n={n}]", abs(v1 + tan(pi / (2 * (n + 1))) ** 2), 1e-9))
        v2 = trigpoly.objective_t2(cf.optimal_coeffs_t2(n).as_array())[0]
        out.append(_le(f"objective-t2[n={n}]", abs(v2 - 1.0 / n), 1e-9))
    for n in (1, 2, 3):
        grid = settings.oracle_grid if n < 3 else settings.oracle_grid_n3
        tol = 5e-3 if n < 3 else 2e-2
        j1 = oracle.brute_force_J1(n, grid, settings.oracle_levels)
        closed1 = -tan(pi / (2 * (n + 1))) ** 2
        out.append(_le(f"oracle-J1[n={n},grid={grid}]", abs(j1 - closed1), tol))
        out.append(_le(f"oracle-J1-below-sup[n={n}]", j1 - closed1, 1e-12))
        j2 = oracle.brute_force_J2(n, grid, settings.oracle_levels)
        out.append(_le(f"oracle-J2[n={n},grid={grid}]", abs(j2 - 1.0 / n), tol))
        out.append(_le(f"oracle-J2-above-inf[n={n}]", 1.0 / n - j2, 1e-12))
    out.append(_le("fejer-inequality[n=6]", 0.0 if oracle.fejer_coefficient_inequality_check(10_000, 6, seed=0) else 1.0, 0.0))
    return out


def random_coverage_vectors(count: int, seed: int = 0, max_n: int = 6) -> list[np.ndarray]:
    rng = np.random.default_rng(seed)
    vecs = []
    for _ in range(count):
        n = int(rng.integers(1, max_n + 1))
        vecs.append(rng.normal(size=n) + 1j * rng.normal(size=n))
    return vecs


def coverage(settings: Settings = Settings(), seed: int = 0) -> list[Check]:
    vecs = random_coverage_vectors(settings.coverage_vectors, seed)
    misses = sum(not stability.coverage_radius_check(v, settings.coverage_probes) for v in vecs)
    out = [_le(f"coverage[{len(vecs)} vectors x {settings.coverage_probes} probes] misses", misses, 0)]
    for n in range(1, 7):
        ok = stability.sharpness_check(n, 0.01)
        out.append(_le(f"sharpness[n={n},delta=0.01]", 0.0 if ok else 1.0, 0.0))
    return out


def univalence(settings: Settings = Settings()) -> list[Check]:
    out = []
    for T in (1, 2):
        for n in range(2, 9):
            _, curve = stability.boundary_curve(cf.optimal_coeffs(T, n), T, settings.univalence_samples)
            hits = stability.self_intersections(curve, tol=1e-7)
            out.append(_le(f"univalence[T={T},n={n}] crossings", len(hits), 0))
    return out


SUITES = {
    "identities": identities,
    "kernels": kernels,
    "extremal": extremal,
    "coverage": coverage,
    "univalence": univalence,
}


def run_suite(name: str, settings: Settings = Settings()) -> list[Check]:
    if name == "all":
        return [c for suite in SUITES.values() for c in suite(settings)]
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name](settings)
