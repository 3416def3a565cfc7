"""Acceptance criteria, one PASS/FAIL line each.

Run directly (``python3 tests/test_acceptance.py``) or through pytest; the
verdict lines are printed even when pytest captures output.
"""

import math
import time

import numpy as np
import pytest

from fejerdfc import coeffs as cf
from fejerdfc import dynamics as dyn
from fejerdfc import oracle, stability, suites, trigpoly

SQ5 = math.sqrt(5.0)


@pytest.fixture
def verdict(capsys):
    def emit(number, title, ok, detail, elapsed, budget):
        ok = bool(ok) and elapsed < budget
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {number:>2}. {title}: {detail} ({elapsed:.2f}s / {budget:.0f}s)")
        assert ok, detail

    return emit


def test_01_closed_form_margins(verdict):
    t0 = time.perf_counter()
    worst = 0.0
    for T in (1, 2):
        for n in range(1, 11):
            rel = abs(stability.mu_margin(cf.optimal_coeffs(T, n), T) / cf.mu_bound(T, n) - 1.0)
            worst = max(worst, rel)
    exact = [stability.mu_margin(cf.optimal_coeffs(T, n), T) for T, n in ((1, 1), (1, 2), (2, 3))]
    ok = worst < 1e-6 and np.allclose(exact, [1.0, 3.0, 9.0], rtol=1e-6)
    verdict(1, "closed-form margins T=1,2 n=1..10", ok, f"max rel err {worst:.2e}, mu(1,1),(1,2),(2,3)={exact}",
            time.perf_counter() - t0, 10)


def test_02_example_coefficients(verdict):
    t0 = time.perf_counter()
    r3 = math.sqrt(3)
    expected = np.array([5 / 6, 2 * r3 / 3, 1.0, r3 / 3, 1 / 6]) * math.tan(math.pi / 12)
    err = float(np.abs(cf.optimal_coeffs_t1(5).as_array() - expected).max())
    verdict(2, "n=5 T=1 coefficients", err < 1e-12, f"max abs err {err:.2e}", time.perf_counter() - t0, 1)


def test_03_equilibrium_stabilization(verdict):
    t0 = time.perf_counter()
    cfg = cf.ControlConfig.from_strength(1, [1 / 3])
    x0 = np.random.default_rng(2024).uniform(0.05, 0.95, 40)
    x, u, _ = dyn.simulate_batch(dyn.logistic(4.0), cfg, x0, 5000)
    converged = np.abs(x[:, -1] - 0.75) < 1e-8
    tail_u = np.abs(u[converged, -500:]).max() if converged.any() else np.inf
    frac = converged.mean()
    verdict(3, "logistic equilibrium, eps=1/3", frac >= 0.9 and tail_u < 1e-8,
            f"{converged.sum()}/{len(x0)} converged, max|u| last 500 = {tail_u:.1e}", time.perf_counter() - t0, 5)


def test_04_two_cycle_stabilization(verdict):
    t0 = time.perf_counter()
    cfg = cf.ControlConfig.from_strength(2, [4 / 9, 1 / 9])
    reps = dyn.detect_cycles(dyn.logistic(4.0), cfg, 30, seed=4, max_period=4)
    conv = [r for r in reps if r.converged]
    target = np.array([(5 - SQ5) / 8, (5 + SQ5) / 8])
    ok = bool(conv) and all(
        r.period == 2 and np.abs(np.sort(r.points) - target).max() < 1e-6 and abs(r.multiplier + 4) < 1e-6 for r in conv
    )
    mults = sorted({round(r.multiplier, 9) for r in conv})
    trials = sum(len(r.trials) for r in conv)
    verdict(4, "logistic 2-cycle, eps=(4/9,1/9)", ok, f"{trials}/30 trials converged, multipliers {mults}",
            time.perf_counter() - t0, 10)


def test_05_three_cycle_detection(verdict):
    t0 = time.perf_counter()
    g = dyn.iterate_map(dyn.logistic(4.0), 3)
    reps = dyn.detect_cycles(g, cf.ControlConfig.optimal(1, 4), 100, seed=0, max_period=3)
    conv = [r for r in reps if r.converged and r.period == 1]
    labels = {}
    for target, want in ((0.117, "genuine-T-cycle"), (0.413, "genuine-T-cycle"), (0.75, "equilibrium")):
        hit = [r for r in conv if abs(r.points[0] - target) < 5e-3]
        if not hit:
            labels[target] = None
            continue
        c = dyn.classify_detected(hit[0], g, 3)
        neg = c.base_multiplier < 0 if want == "genuine-T-cycle" else True
        labels[target] = c.label if neg else c.label + " (positive multiplier)"
    ok = labels == {0.117: "genuine-T-cycle", 0.413: "genuine-T-cycle", 0.75: "equilibrium"}
    verdict(5, "3-cycle via f^3, T=1 n=4", ok, f"labels {labels}", time.perf_counter() - t0, 60)


def test_06_oracle_equivalence(verdict):
    t0 = time.perf_counter()
    s1, s2 = oracle.search_J1(2, 400), oracle.search_J2(2, 400)
    e1, e2 = abs(s1.value + 1 / 3), abs(s2.value - 0.5)
    a1, a2 = cf.optimal_coeffs_t1(2).as_array(), cf.optimal_coeffs_t2(2).as_array()
    attain1 = trigpoly.objective_t1(a1)[0] >= s1.value - 5e-3
    attain2 = trigpoly.objective_t2(a2)[0] <= s2.value + 5e-3
    ok = e1 < 5e-3 and e2 < 5e-3 and attain1 and attain2
    verdict(6, "brute-force J1/J2 at n=2, grid 400", ok, f"|J1+1/3|={e1:.1e}, |J2-1/2|={e2:.1e}",
            time.perf_counter() - t0, 120)


def test_07_identities(verdict):
    t0 = time.perf_counter()
    worst = max(trigpoly.verify_identity(tag, m) for tag in trigpoly.IDENTITY_TAGS for m in range(1, 13))
    verdict(7, "identity suite m=1..12", worst < 1e-9, f"max residual {worst:.1e}", time.perf_counter() - t0, 5)


def test_08_kernel_relations(verdict):
    t0 = time.perf_counter()
    k = max(max(cf.kernel_relation_t1(n), cf.kernel_relation_t2(n)) for n in range(2, 13))
    s = max(max(cf.suffridge_relation_t1(n), cf.suffridge_relation_t2(n)) for n in range(2, 13))
    verdict(8, "kernel and Suffridge relations n=2..12", k < 1e-9 and s < 1e-12,
            f"kernel residual {k:.1e}, Suffridge residual {s:.1e}", time.perf_counter() - t0, 10)


def test_09_covering_disc(verdict):
    t0 = time.perf_counter()
    vecs = suites.random_coverage_vectors(200, seed=0)
    misses = sum(not stability.coverage_radius_check(v, 64) for v in vecs)
    sharp = all(stability.sharpness_check(n, 0.01) for n in range(1, 7))
    verdict(9, "covering disc, 200 vectors x 64 probes", misses == 0 and sharp,
            f"{misses} misses; sharpness witness fails enlarged disc for n=1..6: {sharp}", time.perf_counter() - t0, 60)


CYCLE_CASES = [
    ("logistic h=4 f^3 T=1 n=4", dyn.iterate_map(dyn.logistic(4.0), 3), 1, 4, 3),
    ("logistic h=4 T=2 n=3", dyn.logistic(4.0), 2, 3, 4),
    ("logistic h=3.8 T=1 n=3", dyn.logistic(3.8), 1, 3, 2),
    ("soc ha=2.4 f^3 T=1 n=7", dyn.iterate_map(dyn.soc(2.4), 3), 1, 7, 3),
]


def test_10_cycle_properties(verdict):
    t0 = time.perf_counter()
    total, bad = 0, []
    for name, spec, T, n, max_period in CYCLE_CASES:
        cfg = cf.ControlConfig.optimal(T, n)
        region = stability.multiplier_region(cfg.a, T)
        for r in dyn.detect_cycles(spec, cfg, 50, seed=10, max_period=max_period):
            if not r.converged:
                continue
            total += 1
            base = spec.base_map
            orbit = dyn.orbit(base, r.points[0], r.period * spec.power + 1)
            gap = abs(orbit[-1] - orbit[0])
            if gap > 1e-8 or not region.contains(r.multiplier):
                bad.append((name, r.points, r.multiplier, gap))
    verdict(10, "detected cycles obey the recursion and lie in the region", total > 0 and not bad,
            f"{total} cycles checked, {len(bad)} violations", time.perf_counter() - t0, 120)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
