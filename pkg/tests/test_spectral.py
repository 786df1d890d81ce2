import math
from fractions import Fraction

import pytest

from projects.modules.chain import down_up_kernel, plancherel_measure
from projects.modules.errors import InvariantError, ResourceLimitError, TreeDomainError
from projects.modules.spectral import (
    ROUTE_EIGEN, ROUTE_FLOAT, ROUTE_MATRIX, ROUTE_RECURRENCE, SeparationCurve,
    _eigen_coefficient, a_coefficients, binomial_sigma, eigenvalue, exact_geometric_tail,
    extremal_pairs, geometric_tail, geometric_tail_curve, limit_value, scaled_kernel_powers,
    separation_bruteforce, separation_curve, separation_eigen, separation_float,
    separation_recurrence, separation_updown, separation_updown_bruteforce, spectrum,
    tv_distance, verify_annihilation, verify_trace_identities,
)


# ========== 스펙트럼 ==========

def test_spectrum_small():
    assert spectrum(3).pairs == ((1, 1), (0, 1))
    assert spectrum(4).pairs == ((1, 1), (Fraction(1, 2), 1), (0, 2))


def test_spectrum_multiplicities_six():
    assert [mult for _, mult in spectrum(6).pairs] == [1, 1, 2, 5, 11]


def test_trace_of_k4():
    kernel = down_up_kernel(4)
    assert sum(kernel.entries[i][i] for i in range(4)) == Fraction(3, 2) == spectrum(4).power_sum(1)


@pytest.mark.parametrize("n", range(4, 9))
def test_trace_identities(n):
    assert verify_trace_identities(n, max_power=4)


@pytest.mark.parametrize("n", range(3, 7))
def test_annihilating_polynomial(n):
    assert verify_annihilation(n)


def test_eigenvalue_at_n_vanishes():
    for n in range(2, 30):
        assert eigenvalue(n, n) == 0
        assert eigenvalue(n, 1) == 1
        assert eigenvalue(n, 2) == 1 - Fraction(1, math.comb(n, 2))


def test_leading_coefficient():
    for n in range(4, 15):
        assert _eigen_coefficient(n, 3) == Fraction(10 * (n - 1) * (n - 2), (n + 1) * (n + 2))


def test_coefficients_for_six():
    assert float(_eigen_coefficient(6, 3)) == pytest.approx(3.5714, abs=1e-4)
    assert float(_eigen_coefficient(6, 4)) == pytest.approx(-4.1667, abs=1e-4)
    assert float(_eigen_coefficient(6, 5)) == pytest.approx(1.9286, abs=1e-4)
    assert [eigenvalue(6, i) for i in (3, 4, 5)] == [Fraction(4, 5), Fraction(3, 5), Fraction(1, 3)]


# ========== 닫힌식 / 재귀 ==========

def test_separation_eigen_four():
    assert separation_eigen(4, 0) == 1
    assert separation_eigen(4, 1) == 1
    assert separation_eigen(4, 2) == Fraction(1, 2)
    for r in range(1, 10):
        assert separation_eigen(4, r) == 2 * Fraction(1, 2) ** r


def test_separation_eigen_degenerate_sizes():
    assert separation_eigen(2, 0) == 0
    for r in range(1, 6):
        assert separation_eigen(3, r) == 0
        assert separation_eigen(2, r) == 0


def test_separation_eigen_domain():
    with pytest.raises(TreeDomainError):
        separation_eigen(4, -1)
    with pytest.raises(TreeDomainError):
        separation_eigen(1, 1)


def test_a_coefficients_initial_row():
    assert a_coefficients(4, 0) == [1, 0, 0, 0, 0]
    assert a_coefficients(4, 1) == [0, 1, 0, 0, 0]


def test_recurrence_examples():
    assert separation_recurrence(4, 1) == 1
    assert separation_recurrence(5, 3) == separation_eigen(5, 3)
    with pytest.raises(TreeDomainError):
        separation_recurrence(2, 1)


def test_far_state_unreachable_before_n_minus_two_steps():
    for n in range(4, 9):
        for r in range(n - 2):
            assert separation_recurrence(n, r) == 1


# ========== 전수 계산 ==========

def test_bruteforce_four():
    value, pairs = separation_bruteforce(4, 2)
    assert value == Fraction(1, 2)
    assert pairs[0] == (0, 3)
    assert (3, 0) in pairs


def test_bruteforce_zero_steps():
    value, pairs = separation_bruteforce(4, 0)
    assert value == 1
    assert all(i != j for i, j in pairs)
    assert len(pairs) == 12


def test_bruteforce_cap():
    with pytest.raises(ResourceLimitError):
        separation_bruteforce(9, 1)


@pytest.mark.parametrize("n", range(4, 8))
def test_three_routes_agree(n):
    curves = [separation_curve(n, 25, route) for route in (ROUTE_EIGEN, ROUTE_RECURRENCE, ROUTE_MATRIX)]
    for r in range(1, 26):
        assert curves[0].values[r] == curves[1].values[r] == curves[2].values[r]


@pytest.mark.parametrize("n", range(4, 8))
def test_extremal_pairs_attain_maximum(n):
    path_star, star_path = extremal_pairs(n)
    for r in (1, n - 2, n, 12):
        _, pairs = separation_bruteforce(n, r)
        assert path_star in pairs
        assert star_path in pairs


# ========== 분리거리 성질 ==========

@pytest.mark.parametrize("n", range(3, 8))
def test_monotone_and_submultiplicative(n):
    s = [separation_eigen(n, r) for r in range(21)]
    for r in range(20):
        assert s[r + 1] <= s[r]
    for r1 in range(21):
        for r2 in range(21 - r1):
            assert s[r1 + r2] <= s[r1] * s[r2]


@pytest.mark.parametrize("n", range(3, 7))
def test_total_variation_lower_bound(n):
    probs = plancherel_measure(n).probs
    for r, power, scale in scaled_kernel_powers(down_up_kernel(n), 20):
        exact = [[Fraction(v, scale) for v in row] for row in power]
        assert tv_distance(exact, probs) <= separation_eigen(n, r)


def test_curve_rejects_bad_values():
    with pytest.raises(InvariantError):
        SeparationCurve(4, ROUTE_EIGEN, {1: Fraction(1, 2), 2: Fraction(3, 4)})
    with pytest.raises(InvariantError):
        SeparationCurve(4, ROUTE_EIGEN, {1: Fraction(3, 2)})
    with pytest.raises(ValueError):
        SeparationCurve(4, "power-iteration", {})


# ========== up-down ==========

def test_updown_identity():
    assert separation_updown(3, 1) == separation_eigen(4, 2) == Fraction(1, 2)
    assert separation_updown(4, 2) == separation_eigen(5, 3)
    for n in range(3, 8):
        for r in range(1, 21):
            assert separation_updown(n, r) == separation_eigen(n + 1, r + 1)


def test_updown_direct_powers():
    for n in range(2, 6):
        for r in range(1, 8):
            value, _ = separation_updown_bruteforce(n, r)
            assert value == separation_updown(n, r)


# ========== 기하 표현 ==========

def test_exact_geometric_tail_matches_closed_form():
    for n in (4, 5, 6):
        for r in range(1, 12):
            assert exact_geometric_tail(n, r) == separation_eigen(n, r)


def test_degenerate_geometric_tail():
    assert geometric_tail(3, 1, 1000, seed=0) == 0.0
    assert geometric_tail(3, 5, 1000, seed=0) == 0.0


@pytest.mark.parametrize("n, r", [(4, 2), (6, 10)])
def test_monte_carlo_tail_within_four_sigma(n, r):
    samples = 1_000_000
    exact = float(separation_eigen(n, r))
    estimate = geometric_tail(n, r, samples, seed=0)
    assert abs(estimate - exact) < 4 * binomial_sigma(exact, samples)


def test_tail_curve_is_reproducible():
    first = geometric_tail_curve(6, 15, 20_000, seed=99)
    second = geometric_tail_curve(6, 15, 20_000, seed=99)
    assert first == second
    assert sorted(first) == list(range(1, 16))
    assert all(first[r + 1] <= first[r] for r in range(1, 15))


# ========== 극한 ==========

def test_limit_value_unit_c():
    series = limit_value(1.0, 1e-12)
    expected = 10 * math.exp(-6) - 35 * math.exp(-12) + 81 * math.exp(-20) - 154 * math.exp(-30)
    assert series.value == pytest.approx(expected, rel=1e-12)
    assert series.value == pytest.approx(0.0245735, abs=2e-6)
    assert series.terms_used == 4
    assert 0 < series.tail_bound < 1e-12


def test_limit_value_dominant_term():
    grid = [0.5, 1.0, 2.0, 4.0]
    values = [limit_value(c, 1e-15).value for c in grid]
    assert values == sorted(values, reverse=True)
    assert values[-1] / (10 * math.exp(-24)) == pytest.approx(1.0, abs=1e-6)


def test_limit_value_small_c():
    assert 0 < limit_value(0.25, 1e-12).value < 1


def test_limit_value_sums_growing_terms_before_truncating():
    # c = 0.01 에서 항 크기는 9.42, 31.04, 66.32, 114.09, ... 로 증가 후 감소
    loose = limit_value(0.01, 50.0)
    tight = limit_value(0.01, 1e-12)
    assert loose.terms_used > 4
    assert loose.tail_bound < 50.0
    assert abs(loose.value - tight.value) <= loose.tail_bound


def test_limit_domain():
    with pytest.raises(TreeDomainError):
        limit_value(0.0, 1e-12)


def test_separation_float_matches_exact():
    for r in range(1, 30):
        assert separation_float(6, r) == pytest.approx(float(separation_eigen(6, r)), abs=1e-12)
    assert separation_float(3, 1) == 0.0


def test_float_curve():
    curve = separation_curve(30, 40, ROUTE_FLOAT)
    assert curve.route == ROUTE_FLOAT
    assert len(curve.values) == 40


def test_separation_float_at_one_hundred():
    # n = 100 에서 실제 오차는 약 2.8e-3
    limit = limit_value(1.0, 1e-12).value
    assert abs(separation_float(100, 10_000) - limit) < 4e-3


@pytest.mark.parametrize("c, bound", [(1.0, 2e-3), (0.5, 0.03)])
def test_limit_convergence(c, bound):
    limit = limit_value(c, 1e-12).value
    errors = [abs(separation_float(n, math.ceil(c * n * n)) - limit) for n in (20, 40, 80, 160)]
    assert all(later < earlier for earlier, later in zip(errors, errors[1:]))
    assert errors[-1] < bound
