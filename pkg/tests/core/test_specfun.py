# stdlib
from fractions import Fraction
from typing import Callable

# third party
import mpmath
import pytest
from mpmath import mpc, mpf

# dpartitions absolute
from dpartitions.core.specfun import (
    b_func,
    b_laurent,
    bernoulli_number,
    bernoulli_poly,
    bessel_i,
    bessel_i_oracle,
    check_precision,
    e_func,
    e_taylor,
    euler_e,
    euler_poly,
    l_eval,
    l_eval_via_e,
    lehmer_bound,
    round_up,
    to_mpf,
    xi_eval,
    xi_eval_via_b,
    zeta_value,
)
from dpartitions.utils.errors import QuadratureError

PRECISION = 128


@pytest.mark.parametrize(
    "n,expected",
    [
        (0, Fraction(1)),
        (1, Fraction(-1, 2)),
        (2, Fraction(1, 6)),
        (3, Fraction(0)),
        (4, Fraction(-1, 30)),
        (12, Fraction(-691, 2730)),
        (30, Fraction(8615841276005, 14322)),
    ],
)
def test_bernoulli_number(n: int, expected: Fraction) -> None:
    assert bernoulli_number(n) == expected


def test_bernoulli_number_invalid() -> None:
    with pytest.raises(ValueError):
        bernoulli_number(-1)


@pytest.mark.parametrize(
    "n,x,expected",
    [
        (1, Fraction(1, 4), Fraction(-1, 4)),
        (2, Fraction(1, 2), Fraction(-1, 12)),
        (4, Fraction(1), Fraction(-1, 30)),
        (4, Fraction(1, 2), Fraction(7, 240)),
        (1, Fraction(1), Fraction(1, 2)),
        (3, "1/3", Fraction(1, 27) - Fraction(1, 6) + Fraction(1, 6)),
    ],
)
def test_bernoulli_poly(n: int, x: Fraction, expected: Fraction) -> None:
    assert bernoulli_poly(n, x) == expected


@pytest.mark.parametrize("n", range(0, 31))
def test_bernoulli_poly_endpoints(n: int) -> None:
    assert bernoulli_poly(n, 0) == bernoulli_number(n)
    if n >= 2:
        assert bernoulli_poly(n, 1) - bernoulli_poly(n, 0) == 0


@pytest.mark.parametrize("n", [2, 3, 4, 6])
def test_bernoulli_poly_symmetry(n: int) -> None:
    # B_n(1 - x) = (-1)^n B_n(x)
    for x in [Fraction(1, 5), Fraction(2, 7), Fraction(1, 2)]:
        assert bernoulli_poly(n, 1 - x) == (-1) ** n * bernoulli_poly(n, x)


def test_euler_numbers() -> None:
    assert euler_e(0) == Fraction(1, 2)
    assert euler_e(1) == Fraction(-1, 4)
    assert euler_e(2) == 0
    assert euler_e(3) == Fraction(1, 8)

    for n in range(8):
        assert euler_e(n) == euler_poly(n, 0) / 2


@pytest.mark.parametrize("k", range(1, 11))
def test_euler_numbers_vanish_at_even_index(k: int) -> None:
    assert euler_e(2 * k) == 0


def test_euler_poly_values() -> None:
    # E_1(x) = x - 1/2, E_2(x) = x^2 - x
    assert euler_poly(1, Fraction(1, 3)) == Fraction(-1, 6)
    assert euler_poly(2, Fraction(1, 3)) == Fraction(-2, 9)


def test_zeta_value() -> None:
    with mpmath.workprec(PRECISION):
        assert abs(zeta_value(2, PRECISION) - mpmath.pi**2 / 6) < mpf(2) ** -120
        assert abs(zeta_value(4, PRECISION) - mpmath.pi**4 / 90) < mpf(2) ** -120
        assert zeta_value(3, PRECISION) >= mpmath.zeta(3)

    with pytest.raises(ValueError):
        zeta_value(1)


@pytest.mark.parametrize("n", range(2, 41))
def test_lehmer_bound(n: int) -> None:
    # attained at the endpoints for even n
    bound = lehmer_bound(n, PRECISION)
    with mpmath.workprec(PRECISION):
        slack = bound * mpf(2) ** -120 + mpf(2) ** -100
        for x in [Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1)]:
            assert abs(to_mpf(bernoulli_poly(n, x))) <= bound + slack
        assert abs(to_mpf(bernoulli_number(n))) <= bound + slack


@pytest.mark.parametrize("n", [5, 8, 17])
def test_lehmer_bound_dense_grid(n: int) -> None:
    bound = lehmer_bound(n, PRECISION)
    with mpmath.workprec(PRECISION):
        for k in range(0, 41):
            x = Fraction(k, 40)
            assert abs(to_mpf(bernoulli_poly(n, x))) <= bound * (1 + mpf(2) ** -120)


def test_round_up() -> None:
    with mpmath.workprec(PRECISION):
        x = mpf(3) / 7
        assert round_up(x, PRECISION) > x


def test_check_precision() -> None:
    check_precision(64)
    with pytest.raises(ValueError):
        check_precision(32)


@pytest.mark.parametrize("s", [0, 1, 2, 4])
@pytest.mark.parametrize("x", [0.5, 1, 10, 75])
def test_bessel_i_matches_mpmath(s: int, x: float) -> None:
    value = bessel_i(s, x, PRECISION)
    with mpmath.workprec(PRECISION + 32):
        reference = mpmath.besseli(s, x)
        assert abs(value - reference) <= abs(reference) * mpf(2) ** -(PRECISION - 8)


def test_bessel_i_edge_cases() -> None:
    assert bessel_i(0, 0, PRECISION) == 1
    assert bessel_i(3, 0, PRECISION) == 0

    with pytest.raises(ValueError):
        bessel_i(-1, 1.0)
    with pytest.raises(ValueError):
        bessel_i(1, -1.0)


@pytest.mark.parametrize("s", [0, 1, 2, 4])
@pytest.mark.parametrize("x", [1, 10, 100])
def test_bessel_i_oracle_agrees(s: int, x: int) -> None:
    value, error = bessel_i_oracle(s, x, 256)
    series = bessel_i(s, x, 256)

    with mpmath.workprec(256):
        assert error >= 0
        assert abs(value - series) <= abs(series) * mpf("1e-30")


@pytest.mark.slow
@pytest.mark.parametrize("s", [0, 1, 2, 4])
def test_bessel_i_oracle_large_argument(s: int) -> None:
    value, error = bessel_i_oracle(s, 700, 256)
    series = bessel_i(s, 700, 256)

    with mpmath.workprec(256):
        assert abs(value - series) <= abs(series) * mpf("1e-30")


@pytest.mark.parametrize("s", [0, 1, 2, 4])
@pytest.mark.parametrize("x", [1, 10, 100, 700])
def test_bessel_i_precision_doubling(s: int, x: int) -> None:
    low = bessel_i(s, x, PRECISION)
    high = bessel_i(s, x, 2 * PRECISION)

    with mpmath.workprec(2 * PRECISION):
        assert abs(low - high) <= abs(high) * mpf(2) ** -(PRECISION - 4)


def test_xi_eval_real_argument() -> None:
    z = mpf(1)
    with mpmath.workprec(PRECISION):
        q = mpmath.exp(-z)
        direct = mpmath.fsum(mpmath.log(1 + q**m) for m in range(1, 400))
        assert abs(xi_eval(z, PRECISION) - direct) < mpf(2) ** -100


@pytest.mark.parametrize("z", [mpc("0.3", "0.5"), mpc("0.05", "-0.4"), mpc("1.5", "2.5")])
def test_xi_routes_agree(z: mpc) -> None:
    direct = xi_eval(z, PRECISION)
    via_b = xi_eval_via_b(z, PRECISION)

    with mpmath.workprec(PRECISION):
        assert abs(direct - via_b) <= abs(direct) * mpf(2) ** -90


@pytest.mark.parametrize("cls", [(1, 2), (2, 2), (2, 5), (3, 3)])
@pytest.mark.parametrize("z", [mpc("0.2", "0.7"), mpc("0.04", "0.1")])
def test_l_routes_agree(cls: tuple, z: mpc) -> None:
    direct = l_eval(cls, z, PRECISION)
    via_e = l_eval_via_e(cls, z, PRECISION)

    with mpmath.workprec(PRECISION):
        assert abs(direct - via_e) <= abs(direct) * mpf(2) ** -90


def test_l_eval_matches_coefficients() -> None:
    # L_{1,3}(q) at q = 1/2 against its Lambert-series coefficients
    with mpmath.workprec(PRECISION):
        z = mpmath.log(2)
        expected = mpmath.fsum(
            mpf(1) / 2 ** (3 * k + 1) / (1 + mpf(1) / 2 ** (3 * k + 1)) for k in range(200)
        )
        assert abs(l_eval((1, 3), z, PRECISION) - expected) < mpf(2) ** -100


@pytest.mark.parametrize("func", [xi_eval, xi_eval_via_b])
def test_xi_diverges_off_half_plane(func: Callable) -> None:
    with pytest.raises(QuadratureError):
        func(mpc(0, 1), PRECISION)
    with pytest.raises(QuadratureError):
        func(mpc(-0.1, 0), PRECISION)


def test_l_diverges_off_half_plane() -> None:
    with pytest.raises(QuadratureError):
        l_eval((1, 2), mpc(0, 0.5), PRECISION)
    with pytest.raises(QuadratureError):
        l_eval_via_e((1, 2), mpc(-1, 0), PRECISION)


@pytest.mark.parametrize("z", [mpc("0.5", "0"), mpc("0.3", "0.9"), mpc("-0.6", "0.6")])
def test_e_taylor(z: mpc) -> None:
    with mpmath.workprec(PRECISION):
        assert abs(e_taylor(z, 40, PRECISION) - e_func(z, PRECISION)) < mpf(10) ** -15


@pytest.mark.parametrize("z", [mpc("0.5", "0"), mpc("1", "2"), mpc("0.1", "-0.3")])
def test_b_laurent(z: mpc) -> None:
    with mpmath.workprec(PRECISION):
        reference = b_func(z, PRECISION)
        assert abs(b_laurent(z, 40, PRECISION) - reference) < abs(reference) * mpf(10) ** -12


def test_b_func_definition() -> None:
    z = mpc("0.7", "0.2")
    with mpmath.workprec(PRECISION):
        expected = mpmath.exp(-z) / (z * (1 - mpmath.exp(-z)))
        assert abs(b_func(z, PRECISION) - expected) < mpf(2) ** -110
