import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fejerdfc.coeffs import ControlConfig, mu_bound
from fejerdfc.dynamics import (
    CycleReport,
    DivergenceError,
    classify_detected,
    custom,
    cycle_from_point,
    detect_cycles,
    iterate_map,
    logistic,
    simulate,
    simulate_batch,
    soc,
)

SQ5 = math.sqrt(5.0)
TWO_CYCLE_H4 = ((5 - SQ5) / 8, (5 + SQ5) / 8)


def two_cycle(h):
    """Closed-form period-2 points of the logistic map."""
    d = math.sqrt((h + 1) * (h - 3))
    return (h + 1 - d) / (2 * h), (h + 1 + d) / (2 * h)


class TestMaps:
    def test_logistic_range(self):
        f = logistic(4.0)
        x = np.linspace(0, 1, 1001)
        assert f(x).min() >= 0 and f(x).max() <= 1

    def test_logistic_parameter_checked(self):
        with pytest.raises(ValueError):
            logistic(4.5)

    def test_soc_formula_and_kink(self):
        f = soc(2.4)
        assert f(0.5) == pytest.approx(1.7)
        assert f.df(0.5) == pytest.approx(1 - 2.4)
        assert f.df(0.4999) == pytest.approx(1 + 2.4)

    def test_soc_parameter_checked(self):
        with pytest.raises(ValueError):
            soc(2.5)

    def test_custom_derivative(self):
        g = custom(np.sin)
        x = np.linspace(-2, 2, 9)
        assert np.allclose(g.df(x), np.cos(x), atol=1e-8)


class TestIterateMap:
    def test_power_one_is_base(self):
        f = logistic(4.0)
        assert iterate_map(f, 1) is f

    def test_fixed_point_persists(self):
        assert iterate_map(logistic(4.0), 3)(0.75) == pytest.approx(0.75, abs=1e-15)

    def test_chain_rule_multiplier(self):
        h = 3.3
        eta = two_cycle(h)
        assert iterate_map(logistic(h), 2).df(eta[0]) == pytest.approx(-h * h + 2 * h + 4, abs=1e-12)

    def test_nested_powers_compose(self):
        f = logistic(3.9)
        g = iterate_map(iterate_map(f, 2), 3)
        assert g.power == 6
        x = 0.123
        y = x
        for _ in range(6):
            y = f(y)
        assert g(x) == pytest.approx(y, abs=1e-14)

    def test_overflow_guard(self):
        g = iterate_map(logistic(4.0), 5)
        with pytest.raises(DivergenceError):
            g(5.0)

    def test_invalid_power(self):
        with pytest.raises(ValueError):
            iterate_map(logistic(4.0), 0)


class TestSimulate:
    def test_open_loop_stays_in_interval(self):
        tr = simulate(logistic(4.0), ControlConfig.optimal(1, 1), 0.3, 50)
        assert np.all((tr.x >= 0) & (tr.x <= 1))
        assert np.all(tr.u == 0)

    def test_equilibrium(self):
        tr = simulate(logistic(4.0), ControlConfig.optimal(1, 2), 0.3, 2000)
        assert np.abs(tr.x[1501:] - 0.75).max() < 1e-8
        assert np.abs(tr.u[-100:]).max() < 1e-8

    def test_two_cycle(self):
        tr = simulate(logistic(4.0), ControlConfig.optimal(2, 3), 0.3, 5000)
        tail = tr.x[-2:]
        assert sorted(tail) == pytest.approx(TWO_CYCLE_H4, abs=1e-6)

    @pytest.mark.parametrize("T, n", [(1, 2), (1, 5), (2, 3), (2, 6)])
    def test_recursion_and_control(self, T, n):
        tr = simulate(logistic(4.0), ControlConfig.optimal(T, n), 0.41, 400)
        assert tr.recursion_residual() < 1e-12
        assert tr.control_residual() < 1e-12

    @pytest.mark.parametrize("T, n", [(1, 2), (1, 4), (2, 3), (2, 5)])
    def test_formulations_agree(self, T, n):
        cfg = ControlConfig.optimal(T, n)
        a = simulate(logistic(4.0), cfg, 0.2, 300)
        b = simulate(logistic(4.0), cfg, 0.2, 300, form="control")
        assert np.abs(a.x - b.x).max() < 1e-12

    def test_control_vanishes_on_fixed_point(self):
        cfg = ControlConfig.optimal(1, 4)
        # the difference form is exactly zero; the weighted form up to rounding
        assert np.all(simulate(logistic(4.0), cfg, 0.75, 100, form="control").u == 0)
        assert np.abs(simulate(logistic(4.0), cfg, 0.75, 100).u).max() < 1e-15

    def test_control_vanishes_on_two_cycle(self):
        tr = simulate(logistic(4.0), ControlConfig.optimal(2, 3), TWO_CYCLE_H4[0], 100)
        assert np.abs(tr.u).max() < 1e-12

    def test_divergence(self):
        g = custom(lambda x: 3.0 * x, lambda x: 3.0 + 0 * x)
        with pytest.raises(DivergenceError):
            simulate(g, ControlConfig.optimal(1, 1), 1.0, 100)

    def test_batch_marks_divergence(self):
        g = custom(lambda x: 3.0 * x, lambda x: 3.0 + 0 * x)
        _, _, diverged = simulate_batch(g, ControlConfig.optimal(1, 1), [0.0, 1.0], 100)
        assert diverged.tolist() == [False, True]

    def test_x0_outside_domain(self):
        with pytest.raises(ValueError):
            simulate(logistic(4.0), ControlConfig.optimal(1, 2), 1.5, 10)

    @settings(max_examples=25, deadline=None)
    @given(st.floats(0.01, 0.99))
    def test_convex_weights_keep_orbit_in_interval(self, x0):
        tr = simulate(logistic(4.0), ControlConfig.optimal(1, 3), x0, 200)
        assert tr.x.min() >= 0 and tr.x.max() <= 1


class TestCycles:
    @pytest.mark.parametrize("h", [3.2, 3.5, 3.8, 4.0])
    def test_two_cycle_multiplier(self, h):
        rep = cycle_from_point(logistic(h), two_cycle(h)[0], 2)
        assert rep.converged
        assert rep.multiplier == pytest.approx(-h * h + 2 * h + 4, abs=1e-8)

    def test_rotation_invariance(self):
        f = logistic(4.0)
        eta = math.sin(math.pi / 9) ** 2
        reps = [cycle_from_point(f, x, 3) for x in orbit3(f, eta)]
        ms = [r.multiplier for r in reps]
        assert max(ms) - min(ms) < 1e-10
        assert ms[0] == pytest.approx(-8.0, abs=1e-9)

    def test_detect_equilibrium(self):
        reps = detect_cycles(logistic(3.2), ControlConfig.optimal(1, 2), 10, seed=1, max_period=3)
        assert len(reps) == 1
        rep = reps[0]
        assert rep.converged and rep.period == 1
        assert rep.points[0] == pytest.approx(1 - 1 / 3.2, abs=1e-10)
        assert rep.multiplier == pytest.approx(-1.2, abs=1e-10)
        assert rep.trials == tuple(range(10))

    def test_detect_is_deterministic(self):
        args = (iterate_map(logistic(4.0), 3), ControlConfig.optimal(1, 4), 20)
        a = detect_cycles(*args, seed=5, max_period=3, transient=3000)
        b = detect_cycles(*args, seed=5, max_period=3, transient=3000)
        assert a == b

    def test_unconverged_trials_reported(self):
        # open loop at h=4 is chaotic: nothing settles
        reps = detect_cycles(logistic(4.0), ControlConfig.optimal(1, 1), 5, seed=0, max_period=4, transient=500)
        assert len(reps) == 5
        assert not any(r.converged for r in reps)
        assert [r.trials for r in reps] == [(i,) for i in range(5)]

    def test_detected_cycles_are_in_stable_range(self):
        spec = iterate_map(logistic(4.0), 3)
        cfg = ControlConfig.optimal(1, 4)
        reps = detect_cycles(spec, cfg, 40, seed=2, max_period=3, transient=5000)
        for r in reps:
            if r.converged:
                assert -mu_bound(1, 4) < r.multiplier < 1
                assert r.residual < 1e-8

    def test_soc_three_cycle(self):
        f = soc(2.4)
        g = iterate_map(f, 3)
        reps = detect_cycles(g, ControlConfig.optimal(1, 7), 100, seed=0, max_period=3)
        genuine = [r for r in reps if r.converged and classify_detected(r, g, 3).label == "genuine-T-cycle"]
        assert genuine
        c = classify_detected(genuine[0], g, 3)
        assert sorted(c.base_points) == pytest.approx([0.1390, 0.4749, 1.6149], abs=1e-3)
        assert c.base_multiplier == pytest.approx((1 + 2.4) ** 2 * (1 - 2.4), rel=1e-10)

    def test_kink_flag(self):
        # at ha = 2 the points 1/2 and 3/2 swap, so the orbit passes the kink
        rep = cycle_from_point(soc(2.0), 0.5, 2)
        assert rep.converged and rep.kink_hit
        assert not cycle_from_point(soc(2.4), 1.0, 1).kink_hit


def orbit3(f, x):
    return [x, float(f(x)), float(f(f(x)))]


class TestClassify:
    def test_equilibrium(self):
        g = iterate_map(logistic(4.0), 3)
        rep = cycle_from_point(g, 0.75, 1)
        assert classify_detected(rep, g, 3).label == "equilibrium"

    def test_divisor_cycle(self):
        f = logistic(4.0)
        rep = cycle_from_point(f, TWO_CYCLE_H4[0], 2)
        assert classify_detected(rep, f, 8).label == "divisor-cycle"

    def test_genuine_three_cycle(self):
        g = iterate_map(logistic(4.0), 3)
        for x in (math.sin(math.pi / 9) ** 2, math.sin(2 * math.pi / 9) ** 2, math.sin(4 * math.pi / 9) ** 2):
            c = classify_detected(cycle_from_point(g, x, 1), g, 3)
            assert c.label == "genuine-T-cycle"
            assert c.base_multiplier < 0

    def test_requires_converged(self):
        with pytest.raises(ValueError):
            classify_detected(CycleReport(0, (0.1,), float("nan"), False, 1.0), logistic(4.0), 3)
