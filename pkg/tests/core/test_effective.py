# stdlib
from fractions import Fraction

# third party
import mpmath
import pytest
from mpmath import mpf

# dpartitions absolute
from dpartitions.core.effective import (
    alpha_coefficients,
    alpha_star,
    bessel_gap_bound,
    bessel_gap_integral,
    check_effective,
    effective_grid,
    effective_threshold,
    err_bound,
    err_terms,
    m_value,
    require_effective_range,
    v_bessel,
    v_quadrature,
    v_values,
)
from dpartitions.core.series import d_single, distinct_series
from dpartitions.core.specfun import bernoulli_poly
from dpartitions.utils.constants import BESSEL_GAP_BETA, ERR_XI_COEFF
from dpartitions.utils.errors import HypothesisViolation

PRECISION = 128


@pytest.mark.parametrize("t,expected", [(2, 534), (3, 1201), (5, 3334), (10, 13334)])
def test_effective_threshold(t: int, expected: int) -> None:
    threshold = effective_threshold(t)

    assert threshold == expected
    assert 3 * threshold > 400 * t * t
    assert 3 * (threshold - 1) <= 400 * t * t


def test_require_effective_range() -> None:
    require_effective_range(2, 534)

    with pytest.raises(HypothesisViolation):
        require_effective_range(2, 533)
    with pytest.raises(HypothesisViolation):
        require_effective_range(5, 1000)
    with pytest.raises(HypothesisViolation):
        require_effective_range(1, 10**6)


def test_alpha_coefficients() -> None:
    a0, a1, a2, a4 = alpha_coefficients((2, 2))

    assert a0 == Fraction(1, 2)
    assert a1 == Fraction(-1, 4)
    assert a2 == Fraction(1, 24)
    assert a4 == Fraction(1, 720)

    _, _, _, a4_half = alpha_coefficients((1, 2))
    assert a4_half == -Fraction(8, 192) * bernoulli_poly(4, Fraction(1, 2))


@pytest.mark.parametrize("t", range(2, 11))
def test_alpha_star(t: int) -> None:
    for r in range(1, t):
        assert alpha_star(1, r, t) == Fraction(1, 2 * t)
        assert alpha_star(2, r, t) == Fraction(t - 2 * r - 1, 8 * t)
        assert alpha_star(2, r, t) >= Fraction(-3, 16)
        assert alpha_star(4, r, t) >= Fraction(-233, 48)


def test_alpha_star_invalid() -> None:
    with pytest.raises(ValueError):
        alpha_star(3, 1, 4)
    with pytest.raises(ValueError):
        alpha_star(1, 4, 4)


def test_bessel_gap_bound() -> None:
    assert abs(float(bessel_gap_bound(1, 1, PRECISION)) - 5.2915) < 1e-3
    assert BESSEL_GAP_BETA[2] == 11
    assert BESSEL_GAP_BETA[4] == 1349

    with mpmath.workprec(PRECISION):
        beta_4 = bessel_gap_bound(4, 10, PRECISION)
        beta_1 = bessel_gap_bound(1, 10, PRECISION)
        assert abs(beta_4 - 1349 * beta_1) <= beta_4 * mpf(2) ** -100

    with pytest.raises(ValueError):
        bessel_gap_bound(0, 10)
    with pytest.raises(ValueError):
        bessel_gap_bound(1, 0)


def test_bessel_gap_prefactor_decreases() -> None:
    with mpmath.workprec(PRECISION):
        prefactors = [
            bessel_gap_bound(2, n, PRECISION) * mpmath.exp(-3 * mpmath.pi / 4 * mpmath.sqrt(mpf(n) / 3))
            for n in [1, 2, 10, 100]
        ]
    assert all(a > b for a, b in zip(prefactors, prefactors[1:]))


@pytest.mark.parametrize("s", [1, 2, 4])
@pytest.mark.parametrize("n", [1, 10, 1000])
def test_bessel_gap_integral_is_dominated(s: int, n: int) -> None:
    integral = bessel_gap_integral(s, n, PRECISION)
    with mpmath.workprec(PRECISION):
        prefactor = 24 * BESSEL_GAP_BETA[s] * mpmath.sqrt(2) / (24 * n + 1)
        assert 0 < integral <= prefactor * (1 + mpf(2) ** -(PRECISION - 8))


def test_err_terms() -> None:
    major, xi, minor = err_terms(2, 10**4, PRECISION)
    total = err_bound(2, 10**4, PRECISION)

    with mpmath.workprec(PRECISION):
        assert major > 0 and xi > 0 and minor > 0
        assert abs(total - (major + xi + minor)) <= total * mpf(2) ** -100
        assert mpmath.isfinite(total)

    assert ERR_XI_COEFF == 945285959087


def test_err_first_term_scales_with_t() -> None:
    major_2, _, _ = err_terms(2, 5000, PRECISION)
    major_4, _, _ = err_terms(4, 5000, PRECISION)

    with mpmath.workprec(PRECISION):
        assert abs(major_4 / major_2 - 32) < mpf(2) ** -100


@pytest.mark.parametrize("t,n", [(2, 1000), (3, 10**4), (7, 50000)])
def test_err_bound_rounding(t: int, n: int) -> None:
    low = err_bound(t, n, PRECISION)
    high = err_bound(t, n, 2 * PRECISION)

    with mpmath.workprec(2 * PRECISION):
        assert high <= low * (1 + mpf(2) ** -(PRECISION - 2))


def test_err_bound_invalid() -> None:
    with pytest.raises(ValueError):
        err_bound(1, 100)
    with pytest.raises(ValueError):
        err_bound(2, 0)


@pytest.mark.parametrize("s,n", [(1, 100), (2, 100), (4, 100), (1, 1000), (2, 1000), (4, 1000)])
def test_v_routes_agree(s: int, n: int) -> None:
    quadrature = v_quadrature(s, n, PRECISION)
    bessel = v_bessel(s, n, PRECISION)

    assert quadrature.route == "quadrature"
    assert bessel.route == "bessel"
    with mpmath.workprec(PRECISION):
        gap = abs(quadrature.value - bessel.value)
        assert gap <= quadrature.abs_uncertainty + bessel.abs_uncertainty


@pytest.mark.slow
@pytest.mark.parametrize("s", [1, 2, 4])
def test_v_routes_agree_large_n(s: int) -> None:
    quadrature = v_quadrature(s, 10**4, PRECISION)
    bessel = v_bessel(s, 10**4, PRECISION)

    with mpmath.workprec(PRECISION):
        gap = abs(quadrature.value - bessel.value)
        assert gap <= quadrature.abs_uncertainty + bessel.abs_uncertainty


def test_v_quadrature_v0() -> None:
    value = v_quadrature(0, 1000, PRECISION)

    assert value.value > 0
    assert 0 <= value.abs_uncertainty
    with mpmath.workprec(PRECISION):
        assert value.abs_uncertainty < value.value * mpf(2) ** -40


def test_v_bessel_uncertainty_covers_gap() -> None:
    value = v_bessel(2, 500, PRECISION)

    assert value.abs_uncertainty >= bessel_gap_bound(2, 500, PRECISION)
    assert value.to_dict()["route"] == "bessel"

    with pytest.raises(ValueError):
        v_bessel(0, 500)


def test_v_values() -> None:
    values = v_values(600, PRECISION)

    assert sorted(values) == [0, 1, 2, 4]
    assert values[0].route == "quadrature"
    assert all(values[s].route == "bessel" for s in (1, 2, 4))


def test_m_value_close_to_exact() -> None:
    n = 1000
    value, uncertainty = m_value((1, 2), n, PRECISION)
    exact = d_single((1, 2), n, distinct_series(n))

    with mpmath.workprec(PRECISION):
        assert uncertainty >= 0
        assert abs(mpf(exact) - value) <= err_bound(2, n, PRECISION)
        # the main term carries the leading digits of D
        assert abs(mpf(exact) / value - 1) < mpf("0.01")


@pytest.mark.parametrize("cls,n", [((1, 2), 600), ((2, 2), 534), ((3, 3), 1201), ((1, 3), 1500)])
def test_check_effective(cls: tuple, n: int) -> None:
    report = check_effective(cls, n, PRECISION)

    assert report.passed
    assert report.d_exact == d_single(cls, n, distinct_series(n))
    serialized = report.to_dict()
    assert serialized["pass"] is True
    assert serialized["r"] == cls[0]
    assert serialized["t"] == cls[1]


def test_check_effective_shared_table() -> None:
    distinct = distinct_series(800)
    report = check_effective((1, 2), 700, PRECISION, distinct=distinct)

    assert report.passed


def test_check_effective_precondition() -> None:
    with pytest.raises(HypothesisViolation):
        check_effective((1, 5), 1000, PRECISION)
    with pytest.raises(HypothesisViolation):
        check_effective((1, 1), 1000, PRECISION)


def test_effective_grid() -> None:
    grid = effective_grid(2, 5, 3000)

    assert grid[0] == 534
    assert grid[-1] == 3000
    assert len(grid) == 5
    assert grid == sorted(grid)

    assert effective_grid(5, 10, 3000) == []
    assert effective_grid(2, 1, 3000) == [534]


def _grid_upper(t: int) -> int:
    return max(3000, effective_threshold(t) + 2000)


@pytest.mark.slow
@pytest.mark.parametrize("t", [2, 3, 5])
def test_effective_bound_on_grid(t: int) -> None:
    upper = _grid_upper(t)
    distinct = distinct_series(upper)
    for n in effective_grid(t, 20, upper):
        for r in range(1, t + 1):
            assert check_effective((r, t), n, PRECISION, distinct=distinct).passed
