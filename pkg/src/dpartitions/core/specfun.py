"""Bernoulli and Euler numbers, zeta values, the modified Bessel function I_s,
and direct evaluators of Log xi(e^{-z}) and L_{r,t}(e^{-z}).

Rationals are `fractions.Fraction`; reals and complexes are mpmath `mpf`/`mpc`
evaluated inside `mpmath.workprec(precision)`.
"""
# stdlib
import threading
from fractions import Fraction
from math import comb, factorial
from typing import Callable, List, Tuple, Union

# third party
import mpmath
from mpmath import mpc, mpf
from pydantic import validate_arguments

# dpartitions absolute
import dpartitions.logger as log
from dpartitions.core.series import ClassLike, as_class
from dpartitions.utils.constants import (
    DEFAULT_PRECISION,
    MIN_PRECISION,
    QUADRATURE_MAX_DEGREE,
)
from dpartitions.utils.errors import QuadratureError

RationalLike = Union[Fraction, int, str]
Number = Union[mpf, mpc, int, float, complex]

# extra bits carried by every internal evaluation
GUARD_BITS = 16

_bernoulli_table: List[Fraction] = [Fraction(1)]
_bernoulli_lock = threading.Lock()


def check_precision(precision: int) -> None:
    if precision < MIN_PRECISION:
        raise ValueError(f"precision must be at least {MIN_PRECISION} bits, got {precision}")


def to_mpf(x: RationalLike) -> mpf:
    """Exact rational to mpf at the current working precision."""
    fr = Fraction(x)
    return mpf(fr.numerator) / fr.denominator


def round_up(x: mpf, precision: int) -> mpf:
    """Nudge a non-negative bound up by a relative ulp at `precision` bits."""
    with mpmath.workprec(precision):
        return +(x * (1 + mpf(2) ** (-(precision - 2))))


@validate_arguments
def bernoulli_number(n: int) -> Fraction:
    """
    Exact Bernoulli number B_n (B_1 = -1/2), by the recurrence
    sum_{k=0}^{n} C(n+1, k) B_k = 0.

    The table is shared and grown under a lock, so concurrent readers are safe.
    """
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    if n > 1 and n % 2 == 1:
        return Fraction(0)
    if n < len(_bernoulli_table):
        return _bernoulli_table[n]

    with _bernoulli_lock:
        table = _bernoulli_table
        for m in range(len(table), n + 1):
            if m > 1 and m % 2 == 1:
                table.append(Fraction(0))
                continue
            acc = sum(comb(m + 1, k) * table[k] for k in range(m))
            table.append(-acc / (m + 1))
    return _bernoulli_table[n]


def bernoulli_poly(n: int, x: RationalLike) -> Fraction:
    """B_n(x) = sum_k C(n, k) B_k x^{n-k}, exact at rational x."""
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    x = Fraction(x)
    return sum(
        (comb(n, k) * bernoulli_number(k) * x ** (n - k) for k in range(n + 1)),
        Fraction(0),
    )


def euler_poly(n: int, x: RationalLike) -> Fraction:
    """E_n(x) = 2/(n+1) * (B_{n+1}(x) - 2^{n+1} B_{n+1}(x/2))."""
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    x = Fraction(x)
    return Fraction(2, n + 1) * (
        bernoulli_poly(n + 1, x) - 2 ** (n + 1) * bernoulli_poly(n + 1, x / 2)
    )


def euler_e(n: int) -> Fraction:
    """e_n = E_n(0)/2 = (1 - 2^{n+1}) B_{n+1} / (n+1); the Taylor data of 1/(e^z + 1)."""
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    return (1 - 2 ** (n + 1)) * bernoulli_number(n + 1) / (n + 1)


def zeta_value(n: int, precision: int = DEFAULT_PRECISION) -> mpf:
    """zeta(n) for integer n >= 2.

    Even n is exact through zeta(2k) = (-1)^{k+1} B_{2k} (2 pi)^{2k} / (2 (2k)!).
    Odd n goes through mpmath.zeta, rounded upward.
    """
    if n < 2:
        raise ValueError(f"zeta_value needs n >= 2, got {n}")
    check_precision(precision)
    with mpmath.workprec(precision + GUARD_BITS):
        if n % 2 == 0:
            k = n // 2
            value = (
                (-1) ** (k + 1)
                * to_mpf(bernoulli_number(n))
                * (2 * mpmath.pi) ** n
                / (2 * factorial(n))
            )
        else:
            value = mpmath.zeta(n)
    return round_up(value, precision)


def lehmer_bound(n: int, precision: int = DEFAULT_PRECISION) -> mpf:
    """Upper bound 2 zeta(n) n! / (2 pi)^n for max_{0<=x<=1} |B_n(x)|."""
    if n < 2:
        raise ValueError(f"lehmer_bound needs n >= 2, got {n}")
    zeta = zeta_value(n, precision + GUARD_BITS)
    with mpmath.workprec(precision + GUARD_BITS):
        value = 2 * zeta * factorial(n) / (2 * mpmath.pi) ** n
    return round_up(value, precision)


def bessel_i(s: int, x: Number, precision: int = DEFAULT_PRECISION) -> mpf:
    """
    Modified Bessel function I_s(x) of non-negative integer order, by the
    ascending series sum_k (x/2)^{2k+s} / (k! (k+s)!).

    All terms are positive, so the series is summed without cancellation until
    the current term drops below sum * 2^{-(precision+4)} past the peak.
    """
    if s < 0:
        raise ValueError(f"Only non-negative integer orders are supported (I_-s = I_s), got {s}")
    check_precision(precision)
    with mpmath.workprec(precision + GUARD_BITS):
        x = mpf(x)
        if x < 0:
            raise ValueError(f"bessel_i needs x >= 0, got {x}")
        if x == 0:
            return mpf(1) if s == 0 else mpf(0)
        half_sq = (x / 2) ** 2
        term = (x / 2) ** s / factorial(s)
        total = term
        eps = mpf(2) ** (-(precision + 4))
        k = 0
        while True:
            k += 1
            term = term * half_sq / (k * (k + s))
            total += term
            # terms decrease once k(k+s) > (x/2)^2
            if k * (k + s) > half_sq and term < total * eps:
                break
    with mpmath.workprec(precision):
        return +total


def bessel_i_oracle(
    s: int, x: Number, precision: int = DEFAULT_PRECISION
) -> Tuple[mpf, mpf]:
    """
    I_s(x) = (1/pi) int_0^pi e^{x cos(theta)} cos(s theta) d theta by tanh-sinh quadrature.

    The integrand is scaled by e^{-x} so the quadrature error estimate, which is
    absolute, is measured against an O(1) integral. Returns (value, estimated
    absolute error); raises QuadratureError when the scaled error estimate stays
    above 2^{-precision/2} at the degree cap.
    """
    if s < 0:
        raise ValueError(f"Only non-negative integer orders are supported, got {s}")
    check_precision(precision)
    with mpmath.workprec(precision + GUARD_BITS):
        x = mpf(x)
        if x < 0:
            raise ValueError(f"bessel_i_oracle needs x >= 0, got {x}")

        def integrand(theta: mpf) -> mpf:
            return mpmath.exp(x * (mpmath.cos(theta) - 1)) * mpmath.cos(s * theta)

        points = [mpf(0), mpmath.pi]
        if x > 16:
            # the integrand concentrates in a window of width ~ 1/sqrt(x) at theta = 0
            points = [mpf(0), 4 / mpmath.sqrt(x), mpmath.pi]
        value, error = mpmath.quad(
            integrand, points, error=True, maxdegree=QUADRATURE_MAX_DEGREE
        )
        tolerance = mpf(2) ** (-(precision // 2))
        scale = mpmath.exp(x) / mpmath.pi
        log.debug(
            f"bessel oracle s={s} x={mpmath.nstr(x, 8)} error={mpmath.nstr(error, 5)}"
        )
        if error > tolerance:
            raise QuadratureError(
                f"Bessel integral for s={s}, x={mpmath.nstr(x, 10)} did not converge: "
                f"scaled error {mpmath.nstr(error, 5)} > {mpmath.nstr(tolerance, 5)}"
            )
        value *= scale
        error *= scale
    with mpmath.workprec(precision):
        return +value, +error


def _require_right_half_plane(z: mpc) -> None:
    if z.real <= 0:
        raise QuadratureError(
            f"q-series at q = e^-z diverges for Re(z) = {mpmath.nstr(z.real, 10)} <= 0"
        )


def _sum_geometric_terms(
    term: Callable[[int, mpc], mpc],
    base: mpc,
    first: mpc,
    tail_bound: Callable[[mpf], mpf],
    precision: int,
) -> mpc:
    """
    Sum term(k, w_k) over w_k = first * base^k, k = 0, 1, ...

    Stops when tail_bound(|w_{k+1}|) drops below 2^{-(precision-8)} relative to the sum.
    """
    eps = mpf(2) ** (-(precision - 8))
    floor = mpf(2) ** (-2 * precision)
    base_abs = abs(base)
    w = first
    w_abs = abs(first)
    total = mpc(0)
    k = 0
    while True:
        total += term(k, w)
        w = w * base
        w_abs = w_abs * base_abs
        k += 1
        tail = tail_bound(w_abs)
        if tail <= eps * abs(total) or tail < floor:
            return total


def xi_eval(z: Number, precision: int = DEFAULT_PRECISION) -> mpc:
    """Log xi(e^{-z}) = sum_{m>=1} Log(1 + e^{-mz}), principal branch termwise."""
    check_precision(precision)
    with mpmath.workprec(precision + GUARD_BITS):
        z = mpc(z)
        _require_right_half_plane(z)
        q = mpmath.exp(-z)
        q_abs = abs(q)

        def tail(w_abs: mpf) -> mpf:
            # |Log(1 + w)| <= |w| / (1 - |w|)
            return w_abs / ((1 - q_abs) * (1 - w_abs))

        total = _sum_geometric_terms(
            lambda k, w: mpmath.log(1 + w), q, q, tail, precision
        )
    with mpmath.workprec(precision):
        return +total


def l_eval(cls: ClassLike, z: Number, precision: int = DEFAULT_PRECISION) -> mpc:
    """L_{r,t}(e^{-z}) = sum_{k>=0} w_k / (1 + w_k), w_k = e^{-(kt+r)z}."""
    cls = as_class(cls)
    check_precision(precision)
    with mpmath.workprec(precision + GUARD_BITS):
        z = mpc(z)
        _require_right_half_plane(z)
        step = mpmath.exp(-cls.t * z)
        first = mpmath.exp(-cls.r * z)
        step_abs = abs(step)
        r_abs = abs(first)

        def tail(w_abs: mpf) -> mpf:
            return w_abs / ((1 - step_abs) * (1 - r_abs))

        total = _sum_geometric_terms(
            lambda k, w: w / (1 + w), step, first, tail, precision
        )
    with mpmath.workprec(precision):
        return +total


def e_func(z: Number, precision: int = DEFAULT_PRECISION) -> mpc:
    """E(z) = e^{-z} / (1 + e^{-z}) = 1 / (e^z + 1)."""
    with mpmath.workprec(precision + GUARD_BITS):
        value = 1 / (mpmath.exp(mpc(z)) + 1)
    with mpmath.workprec(precision):
        return +value


def e_taylor(z: Number, order: int, precision: int = DEFAULT_PRECISION) -> mpc:
    """Taylor polynomial sum_{k<=order} e_k z^k / k! of E at 0 (radius of convergence pi)."""
    with mpmath.workprec(precision + GUARD_BITS):
        z = mpc(z)
        value = mpmath.fsum(
            to_mpf(euler_e(k) / factorial(k)) * z**k for k in range(order + 1)
        )
    with mpmath.workprec(precision):
        return +value


def b_func(z: Number, precision: int = DEFAULT_PRECISION) -> mpc:
    """B(z) = e^{-z} / (z (1 - e^{-z})) = 1 / (z (e^z - 1))."""
    with mpmath.workprec(precision + GUARD_BITS):
        z = mpc(z)
        value = 1 / (z * mpmath.expm1(z))
    with mpmath.workprec(precision):
        return +value


def b_laurent(z: Number, order: int, precision: int = DEFAULT_PRECISION) -> mpc:
    """Laurent polynomial 1/z^2 - 1/(2z) + sum_{k<=order} B_{k+2} z^k / (k+2)! (radius 2 pi)."""
    with mpmath.workprec(precision + GUARD_BITS):
        z = mpc(z)
        regular = mpmath.fsum(
            to_mpf(bernoulli_number(k + 2) / factorial(k + 2)) * z**k
            for k in range(order + 1)
        )
        value = 1 / z**2 - 1 / (2 * z) + regular
    with mpmath.workprec(precision):
        return +value


def xi_eval_via_b(z: Number, precision: int = DEFAULT_PRECISION) -> mpc:
    """
    Log xi(e^{-z}) = z * sum_{j>=1} (-1)^{j-1} B(jz)
                   = z * sum_{m>=0} [B((m + 1/2) 2z) - B((m + 1) 2z)].
    """
    check_precision(precision)
    with mpmath.workprec(precision + GUARD_BITS):
        z = mpc(z)
        _require_right_half_plane(z)
        eta = z.real
        decay = mpmath.exp(-eta)
        eps = mpf(2) ** (-(precision - 8))
        floor = mpf(2) ** (-2 * precision)
        total = mpc(0)
        j = 1
        while True:
            w = j * z
            term = 1 / (w * mpmath.expm1(w))
            total += term if j % 2 == 1 else -term
            j += 1
            # |z B(jz)| <= e^{-j eta} / (j (1 - e^{-eta})) termwise
            tail = decay**j / (j * (1 - decay) ** 2)
            if tail <= eps * abs(z * total) or tail < floor:
                break
        total *= z
    with mpmath.workprec(precision):
        return +total


def l_eval_via_e(cls: ClassLike, z: Number, precision: int = DEFAULT_PRECISION) -> mpc:
    """L_{r,t}(e^{-z}) = sum_{k>=0} E((k + r/t) t z), each E through 1/(e^w + 1)."""
    cls = as_class(cls)
    check_precision(precision)
    with mpmath.workprec(precision + GUARD_BITS):
        z = mpc(z)
        _require_right_half_plane(z)
        shift = to_mpf(Fraction(cls.r, cls.t))
        tz = cls.t * z
        decay = mpmath.exp(-cls.t * z.real)
        offset = mpmath.exp(-cls.r * z.real)
        eps = mpf(2) ** (-(precision - 8))
        floor = mpf(2) ** (-2 * precision)
        total = mpc(0)
        k = 0
        while True:
            total += 1 / (mpmath.exp((k + shift) * tz) + 1)
            k += 1
            tail = offset * decay**k / ((1 - decay) * (1 - offset))
            if tail <= eps * abs(total) or tail < floor:
                break
    with mpmath.workprec(precision):
        return +total
