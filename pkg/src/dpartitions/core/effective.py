"""Effective form of the asymptotic for D_{r,t}(n).

For t >= 2 and n > 400t^2/3,

    |D_{r,t}(n) - M_{r,t}(n)| <= Err_t(n),
    M_{r,t}(n) = a_0 V_0(n) + a_1 V_1(n) + a_2 V_2(n) + a_4 V_4(n),

where V_s(n) is the contour integral of z^{s-1} exp(pi^2/(12z) + (n + 1/24) z)
over the segment Re z = eta, |Im z| <= 10 eta, eta = pi / sqrt(12n).
"""
# stdlib
from fractions import Fraction
from functools import lru_cache
from math import ceil, comb, factorial
from typing import Dict, List, Optional, Tuple

# third party
import mpmath
from mpmath import mpc, mpf
from pydantic import validate_arguments

# dpartitions absolute
import dpartitions.logger as log
from dpartitions.core.schema import EffectiveReport, VValue
from dpartitions.core.series import ClassLike, QSeries, as_class, d_single, distinct_series
from dpartitions.core.specfun import (
    GUARD_BITS,
    bernoulli_poly,
    bessel_i,
    check_precision,
    round_up,
    to_mpf,
)
from dpartitions.utils.constants import (
    BESSEL_GAP_BETA,
    DEFAULT_PRECISION,
    ERR_MAJOR_COEFF,
    ERR_MINOR_COEFF,
    ERR_XI_COEFF,
    QUADRATURE_MAX_DEGREE,
)
from dpartitions.utils.errors import (
    HypothesisViolation,
    PrecisionExhausted,
    QuadratureError,
)

V_ORDERS = (0, 1, 2, 4)
BESSEL_ORDERS = (1, 2, 4)


def effective_threshold(t: int) -> int:
    """Smallest integer n with n > 400t^2/3."""
    return (400 * t * t) // 3 + 1


def require_effective_range(t: int, n: int) -> None:
    if t < 2:
        raise HypothesisViolation(f"The effective bound needs t >= 2, got t = {t}")
    if 3 * n <= 400 * t * t:
        raise HypothesisViolation(
            f"The effective bound needs n > 400t^2/3 = {Fraction(400 * t * t, 3)}, got n = {n}"
        )


def _require_order(s: int, allowed: Tuple[int, ...]) -> None:
    if s not in allowed:
        raise ValueError(f"Order s = {s} not supported, expected one of {allowed}")


def alpha_coefficients(cls: ClassLike) -> Tuple[Fraction, Fraction, Fraction, Fraction]:
    """
    Rational data of (a_0, a_1, a_2, a_4).

    a_0 is returned as 1/t; the coefficient itself is log(2)/t.
    a_1 = -B_1(r/t)/2, a_2 = (t/8) B_2(r/t), a_4 = -(t^3/192) B_4(r/t).
    """
    cls = as_class(cls)
    x = Fraction(cls.r, cls.t)
    t = cls.t
    return (
        Fraction(1, t),
        -bernoulli_poly(1, x) / 2,
        Fraction(t, 8) * bernoulli_poly(2, x),
        -Fraction(t**3, 192) * bernoulli_poly(4, x),
    )


def alpha_star(j: int, r: int, t: int) -> Fraction:
    """a_{j,r} - a_{j,r+1}, for j in {1, 2, 4} and 1 <= r < t."""
    if j not in BESSEL_ORDERS:
        raise ValueError(f"alpha_star is defined for j in {BESSEL_ORDERS}, got {j}")
    if not (1 <= r < t):
        raise ValueError(f"alpha_star needs 1 <= r < t, got r = {r}, t = {t}")
    index = BESSEL_ORDERS.index(j) + 1
    return alpha_coefficients((r, t))[index] - alpha_coefficients((r + 1, t))[index]


def bessel_gap_bound(s: int, n: int, precision: int = DEFAULT_PRECISION) -> mpf:
    """24 beta_s sqrt(2) / (24n + 1) * exp((3 pi / 4) sqrt(n/3)), rounded upward."""
    _require_order(s, BESSEL_ORDERS)
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    with mpmath.workprec(precision + GUARD_BITS):
        value = (
            24
            * BESSEL_GAP_BETA[s]
            * mpmath.sqrt(2)
            / (24 * n + 1)
            * mpmath.exp(3 * mpmath.pi / 4 * mpmath.sqrt(mpf(n) / 3))
        )
    return round_up(value, precision)


def bessel_gap_integral(s: int, n: int, precision: int = DEFAULT_PRECISION) -> mpf:
    """
    sqrt(2) * int_0^inf (10 + u)^{s-1} e^{-(n + 1/24) u} du in closed form,
    the quantity beta_s dominates: it never exceeds 24 beta_s sqrt(2) / (24n + 1).
    """
    _require_order(s, BESSEL_ORDERS)
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    m = s - 1
    a = Fraction(24 * n + 1, 24)
    exact = sum(
        comb(m, k) * Fraction(10) ** (m - k) * factorial(k) / a ** (k + 1)
        for k in range(m + 1)
    )
    with mpmath.workprec(precision + GUARD_BITS):
        value = mpmath.sqrt(2) * to_mpf(exact)
    return round_up(value, precision)


def err_terms(t: int, n: int, precision: int = DEFAULT_PRECISION) -> Tuple[mpf, mpf, mpf]:
    """The three summands of Err_t(n): major-arc L error, major-arc xi error, minor arc."""
    if t < 2:
        raise ValueError(f"Err_t needs t >= 2, got {t}")
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    with mpmath.workprec(precision + GUARD_BITS):
        n_mp = mpf(n)
        growth = mpmath.exp(mpmath.pi * mpmath.sqrt(n_mp / 3))
        major = ERR_MAJOR_COEFF * mpf(t) ** 5 / n_mp**3 * growth
        xi = ERR_XI_COEFF / (t * n_mp**4) * growth
        minor_rate = 3 * mpmath.sqrt(3) / (2 * mpmath.pi) + mpmath.pi / mpmath.sqrt(12)
        minor = ERR_MINOR_COEFF * n_mp * mpmath.exp(minor_rate * mpmath.sqrt(n_mp))
    return round_up(major, precision), round_up(xi, precision), round_up(minor, precision)


def err_bound(t: int, n: int, precision: int = DEFAULT_PRECISION) -> mpf:
    """Err_t(n), rounded upward."""
    terms = err_terms(t, n, precision + GUARD_BITS)
    with mpmath.workprec(precision + GUARD_BITS):
        total = mpmath.fsum(terms)
    return round_up(total, precision)


def _segment_points(saddle_sharpness: mpf, oscillation: mpf) -> List[mpf]:
    """Breakpoints on u in [-10, 10]: dense around the peak at 0, then one piece
    per few oscillations of e^{i oscillation u}."""
    width = 1 / mpmath.sqrt(saddle_sharpness)
    inner = [w for w in (width / 2, 2 * width, 6 * width) if w < 1]
    piece = 8 * mpmath.pi / max(oscillation, mpf(1))
    count = max(1, int(ceil(9 / piece)))
    outer = [1 + 9 * mpf(k) / count for k in range(count + 1)]
    positive = sorted(set(inner)) + outer
    return [-u for u in reversed(positive)] + [mpf(0)] + positive


@lru_cache(maxsize=512)
def _v_segment_integral(s: int, n: int, precision: int) -> Tuple[mpc, mpf]:
    """(V_s(n) as a complex number, estimated absolute error), at `precision` bits.

    With z = eta (1 + iu), A = pi^2/(12 eta) and B = (n + 1/24) eta,

        V_s(n) = eta^s e^{A + B} / (2 pi sqrt 2) * int_{-10}^{10} g(u) du,
        g(u)   = (1 + iu)^{s-1} exp(-iAu / (1 + iu) + iBu),

    and g is concentrated in a window of width ~ 1/sqrt(A) around u = 0 where
    |g(0)| = 1, so the absolute quadrature error estimate is measured against
    an O(1/sqrt(A)) integral.
    """
    with mpmath.workprec(precision + GUARD_BITS):
        n_shift = mpf(n) + mpf(1) / 24
        eta = mpmath.pi / mpmath.sqrt(12 * mpf(n))
        A = mpmath.pi**2 / (12 * eta)
        B = n_shift * eta
        j = mpc(0, 1)

        def g(u: mpf) -> mpc:
            w = 1 + j * u
            return w ** (s - 1) * mpmath.exp(-j * A * u / w + j * B * u)

        points = _segment_points(A, B)
        integral, error = mpmath.quad(
            g, points, error=True, maxdegree=QUADRATURE_MAX_DEGREE
        )
        tolerance = abs(integral) * mpf(2) ** (-(precision // 2))
        if error > tolerance:
            raise QuadratureError(
                f"V_{s}({n}) quadrature did not converge: scaled error "
                f"{mpmath.nstr(error, 5)} > {mpmath.nstr(tolerance, 5)}"
            )
        scale = eta**s * mpmath.exp(A + B) / (2 * mpmath.pi * mpmath.sqrt(2))
        log.debug(
            f"V_{s}({n}) quadrature over {len(points) - 1} pieces, scaled error {mpmath.nstr(error, 5)}"
        )
        return integral * scale, error * scale


def v_quadrature(s: int, n: int, precision: int = DEFAULT_PRECISION) -> VValue:
    """V_s(n) by direct quadrature of the defining segment integral.

    The integrand is conjugate-symmetric in u, so the integral is real; the
    imaginary residue of the raw result is folded into the uncertainty.
    """
    if s < 0:
        raise ValueError(f"s must be non-negative, got {s}")
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    check_precision(precision)
    raw, error = _v_segment_integral(s, n, precision)
    with mpmath.workprec(precision):
        value = +raw.real
        uncertainty = round_up(error + abs(raw.imag), precision)
    return VValue(s=s, n=n, value=value, abs_uncertainty=uncertainty, route="quadrature")


def v_bessel(s: int, n: int, precision: int = DEFAULT_PRECISION) -> VValue:
    """
    V_s(n) ~ (1/sqrt 2) ((24n + 1) / (2 pi^2))^{-s/2} I_s(pi sqrt((n + 1/24)/3)),
    with the uncertainty covering the gap to the segment integral.
    """
    _require_order(s, BESSEL_ORDERS)
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    check_precision(precision)
    with mpmath.workprec(precision + GUARD_BITS):
        n_shift = mpf(n) + mpf(1) / 24
        x = mpmath.pi * mpmath.sqrt(n_shift / 3)
        bessel = bessel_i(s, x, precision + GUARD_BITS)
        ratio = (24 * mpf(n) + 1) / (2 * mpmath.pi**2)
        value = ratio ** (-mpf(s) / 2) * bessel / mpmath.sqrt(2)
        evaluation_error = abs(value) * mpf(2) ** (-(precision - 8))
        uncertainty = bessel_gap_bound(s, n, precision + GUARD_BITS) + evaluation_error
    with mpmath.workprec(precision):
        value = +value
    return VValue(
        s=s,
        n=n,
        value=value,
        abs_uncertainty=round_up(uncertainty, precision),
        route="bessel",
    )


def v_values(n: int, precision: int = DEFAULT_PRECISION) -> Dict[int, VValue]:
    """The four V's entering M: V_0 by quadrature, V_1, V_2, V_4 by the Bessel form."""
    values = {0: v_quadrature(0, n, precision)}
    for s in BESSEL_ORDERS:
        values[s] = v_bessel(s, n, precision)
    return values


def m_value(cls: ClassLike, n: int, precision: int = DEFAULT_PRECISION) -> Tuple[mpf, mpf]:
    """(M_{r,t}(n), propagated absolute uncertainty)."""
    cls = as_class(cls)
    require_effective_range(cls.t, n)
    check_precision(precision)
    a0, a1, a2, a4 = alpha_coefficients(cls)
    values = v_values(n, precision)
    with mpmath.workprec(precision + GUARD_BITS):
        coefficients = {
            0: mpmath.log(2) * to_mpf(a0),
            1: to_mpf(a1),
            2: to_mpf(a2),
            4: to_mpf(a4),
        }
        total = mpmath.fsum(coefficients[s] * values[s].value for s in V_ORDERS)
        uncertainty = mpmath.fsum(
            abs(coefficients[s]) * values[s].abs_uncertainty for s in V_ORDERS
        )
        uncertainty += abs(total) * mpf(2) ** (-(precision - 8))
    with mpmath.workprec(precision):
        total = +total
    return total, round_up(uncertainty, precision)


def _effective_report(
    cls: ClassLike, n: int, d_exact: int, precision: int
) -> EffectiveReport:
    value, uncertainty = m_value(cls, n, precision)
    return EffectiveReport(
        cls=as_class(cls),
        n=n,
        d_exact=d_exact,
        m_value=value,
        m_uncertainty=uncertainty,
        err_bound=err_bound(as_class(cls).t, n, precision),
        precision=precision,
    )


def check_effective(
    cls: ClassLike,
    n: int,
    precision: int = DEFAULT_PRECISION,
    distinct: Optional[QSeries] = None,
) -> EffectiveReport:
    """
    Verify |D_{r,t}(n) - M_{r,t}(n)| + uncertainty(M) <= Err_t(n) at one point.

    The decision is recomputed at twice the precision; if it changes,
    PrecisionExhausted is raised. `distinct` may carry a precomputed
    distinct-partition table of truncation >= n.
    """
    cls = as_class(cls)
    require_effective_range(cls.t, n)
    check_precision(precision)
    if distinct is None:
        distinct = distinct_series(n)
    d_exact = d_single(cls, n, distinct)

    report = _effective_report(cls, n, d_exact, precision)
    confirmation = _effective_report(cls, n, d_exact, 2 * precision)
    if report.passed != confirmation.passed:
        raise PrecisionExhausted(
            f"Effective check for {cls} at n = {n} changes between "
            f"{precision} and {2 * precision} bits"
        )
    log.debug(
        f"check_effective {cls} n={n}: deviation {mpmath.nstr(report.deviation(), 8)} "
        f"bound {mpmath.nstr(report.err_bound, 8)}"
    )
    return report


@validate_arguments
def effective_grid(t: int, count: int, upper: int) -> List[int]:
    """`count` evenly spread integers in (400t^2/3, upper], deterministic."""
    lower = effective_threshold(t)
    if upper < lower or count < 1:
        return []
    span = upper - lower
    if count == 1 or span == 0:
        return [lower]
    return sorted({lower + (span * k) // (count - 1) for k in range(count)})
