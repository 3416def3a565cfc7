import math

import pytest

from fejerdfc.coeffs import optimal_coeffs_t1, optimal_coeffs_t2
from fejerdfc.oracle import (
    brute_force_J1,
    brute_force_J2,
    extremizer_first_coefficient,
    fejer_coefficient_inequality_check,
    near_optimal_spread,
    search_J1,
    search_J2,
)
from fejerdfc.trigpoly import objective_t1, objective_t2


def closed_j1(n):
    return -math.tan(math.pi / (2 * (n + 1))) ** 2


class TestBruteForce:
    def test_depth_one(self):
        assert brute_force_J1(1, 50) == pytest.approx(-1.0, abs=1e-15)
        assert brute_force_J2(1, 50) == pytest.approx(1.0, abs=1e-15)

    def test_j1_depth_two(self):
        v = brute_force_J1(2, 400)
        assert abs(v - (-1 / 3)) < 5e-3
        assert v <= -1 / 3 + 1e-12

    def test_j2_depth_two(self):
        v = brute_force_J2(2, 400)
        assert abs(v - 0.5) < 5e-3
        assert v >= 0.5 - 1e-12

    def test_depth_three_coarse(self):
        assert abs(brute_force_J1(3, 100) - closed_j1(3)) < 2e-2
        assert abs(brute_force_J2(3, 100) - 1 / 3) < 2e-2

    def test_single_level_grid_is_coarser(self):
        one = brute_force_J1(2, 100, levels=1)
        assert one <= brute_force_J1(2, 100, levels=3) + 1e-15

    def test_closed_form_attains_oracle(self):
        s1 = search_J1(2, 400)
        assert objective_t1(optimal_coeffs_t1(2).as_array())[0] >= s1.value - 1e-12
        s2 = search_J2(2, 400)
        assert objective_t2(optimal_coeffs_t2(2).as_array())[0] <= s2.value + 1e-12

    def test_uniqueness_near_optimum(self):
        s1 = search_J1(2, 400)
        assert near_optimal_spread(s1, optimal_coeffs_t1(2).a) <= 0.05
        s2 = search_J2(2, 400)
        assert near_optimal_spread(s2, optimal_coeffs_t2(2).a, maximize=False) <= 0.05

    @pytest.mark.parametrize("n, grid", [(4, 100), (2, 10)])
    def test_preconditions(self, n, grid):
        with pytest.raises(ValueError):
            brute_force_J1(n, grid)


class TestFejerInequality:
    @pytest.mark.parametrize("n", [1, 2, 3, 6, 10])
    def test_extremizer_is_sharp(self, n):
        assert extremizer_first_coefficient(n) == pytest.approx(2 * math.cos(math.pi / (n + 2)), abs=1e-9)

    def test_bound_n1(self):
        assert 2 * math.cos(math.pi / 3) == pytest.approx(1.0)

    def test_random_samples(self):
        assert fejer_coefficient_inequality_check(10_000, 6, seed=11)

    @pytest.mark.parametrize("n", [1, 2, 4])
    def test_small_depths(self, n):
        assert fejer_coefficient_inequality_check(2_000, n, seed=n)
