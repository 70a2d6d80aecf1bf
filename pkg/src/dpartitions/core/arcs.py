"""Numeric spot checks of the major- and minor-arc bounds on xi(e^{-z}) and L_{r,t}(e^{-z}).

Each validator evaluates its left side directly at z = eta + iy, compares it
with the printed bound, and refuses points outside the region the bound is
proven for. Regions:

    major: 0 <= |y| < 10 eta, 0 < eta < pi / (40 t)
    minor: 10 eta <= |y| < pi, 0 < eta < pi / (40 t)
    any:   eta > 0
"""
# stdlib
from fractions import Fraction
from typing import Callable, Dict, List, NamedTuple, Optional, Tuple, Union

# third party
import mpmath
from mpmath import mpc, mpf

# dpartitions absolute
import dpartitions.logger as log
from dpartitions.core.effective import alpha_coefficients
from dpartitions.core.schema import ArcCheck
from dpartitions.core.series import ClassLike, as_class
from dpartitions.core.specfun import GUARD_BITS, check_precision, l_eval, to_mpf, xi_eval
from dpartitions.utils.constants import DEFAULT_PRECISION
from dpartitions.utils.errors import HypothesisViolation

Number = Union[mpc, mpf, complex, float, int]

L_GAP_PROVEN = Fraction(7, 25)
L_GAP_STATED = Fraction(1, 20)

# eta as a fraction of pi/(40t)
DEFAULT_ETA_BAND = ("0.4", "0.95")
# the L expansion leaves a term of size exp(-c Re(1/(tz))), which beats
# (7/25) t^5 |z|^5 near |y| = 10 eta unless t eta is below about 0.006
L_GAP_ETA_BAND = ("0.025", "0.05")


def _major_eta_limit(t: int) -> mpf:
    return mpmath.pi / (40 * t)


def require_region(z: mpc, region: str, t: int = 2) -> None:
    eta, y = z.real, abs(z.imag)
    if eta <= 0:
        raise HypothesisViolation(f"Re(z) = {mpmath.nstr(eta, 8)} must be positive")
    if region == "any":
        return
    if t < 2:
        raise HypothesisViolation(f"Arc bounds need t >= 2, got t = {t}")
    if eta >= _major_eta_limit(t):
        raise HypothesisViolation(
            f"eta = {mpmath.nstr(eta, 8)} violates eta < pi/(40t) for t = {t}"
        )
    if region == "major" and not y < 10 * eta:
        raise HypothesisViolation(
            f"|y| = {mpmath.nstr(y, 8)} lies outside the major arc |y| < 10 eta"
        )
    if region == "minor" and not (10 * eta <= y < mpmath.pi):
        raise HypothesisViolation(
            f"|y| = {mpmath.nstr(y, 8)} lies outside the minor arc 10 eta <= |y| < pi"
        )


def _check(name: str, z: mpc, lhs: mpf, rhs: mpf, precision: int) -> ArcCheck:
    with mpmath.workprec(precision):
        return ArcCheck(name=name, z=+z, lhs=+lhs, rhs=+rhs, holds=bool(lhs < rhs))


def l_major_gap(cls: ClassLike, z: Number, precision: int = DEFAULT_PRECISION) -> ArcCheck:
    """
    |L - (log 2/(tz) - B_1(r/t)/2 + (t/8) B_2(r/t) z - (t^3/192) B_4(r/t) z^3)| < (7/25) t^5 |z|^5.

    Samples where the gap reaches (1/20) t^5 |z|^5 are flagged and logged, not failed.
    """
    cls = as_class(cls)
    check_precision(precision)
    with mpmath.workprec(precision + GUARD_BITS):
        z = mpc(z)
        require_region(z, "major", cls.t)
        a0, a1, a2, a4 = alpha_coefficients(cls)
        approx = (
            mpmath.log(2) * to_mpf(a0) / z + to_mpf(a1) + to_mpf(a2) * z + to_mpf(a4) * z**3
        )
        lhs = abs(l_eval(cls, z, precision) - approx)
        scale = mpf(cls.t) ** 5 * abs(z) ** 5
        rhs = to_mpf(L_GAP_PROVEN) * scale
        stated = to_mpf(L_GAP_STATED) * scale
        result = _check("l_major_gap", z, lhs, rhs, precision)
    if lhs >= stated:
        message = (
            f"l_major_gap {cls} at z = {mpmath.nstr(z, 8)}: gap {mpmath.nstr(lhs, 6)} "
            f"exceeds (1/20) t^5 |z|^5 = {mpmath.nstr(stated, 6)}"
        )
        log.warning(message)
        result.flags.append(message)
    return result


def l_major_abs(cls: ClassLike, z: Number, precision: int = DEFAULT_PRECISION) -> ArcCheck:
    """|L| < 14 / |tz| on the major arc."""
    cls = as_class(cls)
    check_precision(precision)
    with mpmath.workprec(precision + GUARD_BITS):
        z = mpc(z)
        require_region(z, "major", cls.t)
        lhs = abs(l_eval(cls, z, precision))
        rhs = 14 / abs(cls.t * z)
        return _check("l_major_abs", z, lhs, rhs, precision)


def xi_log_major(z: Number, precision: int = DEFAULT_PRECISION, t: int = 2) -> ArcCheck:
    """|Log xi - pi^2/(12z) + log(2)/2 - z/24| < 471 |z|^8 on the major arc for modulus t."""
    check_precision(precision)
    with mpmath.workprec(precision + GUARD_BITS):
        z = mpc(z)
        require_region(z, "major", t)
        main = mpmath.pi**2 / (12 * z) - mpmath.log(2) / 2 + z / 24
        lhs = abs(xi_eval(z, precision) - main)
        rhs = 471 * abs(z) ** 8
        return _check("xi_log_major", z, lhs, rhs, precision)


def xi_major_exp(z: Number, precision: int = DEFAULT_PRECISION, t: int = 2) -> ArcCheck:
    """|xi - exp(pi^2/(12z) - log(2)/2 + z/24)| < (630 |z|^8 / sqrt 2) exp(pi^2/(12|z|))."""
    check_precision(precision)
    with mpmath.workprec(precision + GUARD_BITS):
        z = mpc(z)
        require_region(z, "major", t)
        main = mpmath.exp(mpmath.pi**2 / (12 * z) - mpmath.log(2) / 2 + z / 24)
        lhs = abs(mpmath.exp(xi_eval(z, precision)) - main)
        rhs = 630 * abs(z) ** 8 / mpmath.sqrt(2) * mpmath.exp(mpmath.pi**2 / (12 * abs(z)))
        return _check("xi_major_exp", z, lhs, rhs, precision)


def xi_minor(z: Number, precision: int = DEFAULT_PRECISION, t: int = 2) -> ArcCheck:
    """|xi| < exp(41 / (50 eta)) on the minor arc."""
    check_precision(precision)
    with mpmath.workprec(precision + GUARD_BITS):
        z = mpc(z)
        require_region(z, "minor", t)
        lhs = mpmath.exp(xi_eval(z, precision).real)
        rhs = mpmath.exp(41 / (50 * z.real))
        return _check("xi_minor", z, lhs, rhs, precision)


def l_minor(cls: ClassLike, z: Number, precision: int = DEFAULT_PRECISION) -> ArcCheck:
    """|L| < 1 / eta^2 anywhere in Re(z) > 0."""
    cls = as_class(cls)
    check_precision(precision)
    with mpmath.workprec(precision + GUARD_BITS):
        z = mpc(z)
        require_region(z, "any")
        lhs = abs(l_eval(cls, z, precision))
        rhs = 1 / z.real**2
        return _check("l_minor", z, lhs, rhs, precision)


class ArcValidator(NamedTuple):
    func: Callable[..., ArcCheck]
    region: str
    needs_class: bool
    eta_band: Tuple[str, str] = DEFAULT_ETA_BAND


ARC_VALIDATORS: Dict[str, ArcValidator] = {
    "l_major_gap": ArcValidator(l_major_gap, "major", True, L_GAP_ETA_BAND),
    "l_major_abs": ArcValidator(l_major_abs, "major", True),
    "xi_log_major": ArcValidator(xi_log_major, "major", False),
    "xi_major_exp": ArcValidator(xi_major_exp, "major", False),
    "xi_minor": ArcValidator(xi_minor, "minor", False),
    "l_minor": ArcValidator(l_minor, "any", True),
}


def sample_grid(
    region: str,
    t: int,
    samples: int,
    precision: int = DEFAULT_PRECISION,
    eta_band: Tuple[str, str] = DEFAULT_ETA_BAND,
) -> List[mpc]:
    """
    Deterministic in-region sample points.

    Major and minor arcs take eta in eta_band * pi/(40t); the y coordinate
    sweeps its allowed interval with alternating sign.
    """
    if samples < 1:
        raise ValueError(f"samples must be positive, got {samples}")
    if region not in ("major", "minor", "any"):
        raise ValueError(f"Unknown region {region}")
    if t < 2 and region != "any":
        raise ValueError(f"Arc grids need t >= 2, got t = {t}")
    points = []
    with mpmath.workprec(precision):
        limit = _major_eta_limit(t)
        low_frac, high_frac = mpf(eta_band[0]), mpf(eta_band[1])
        if not 0 < low_frac <= high_frac < 1:
            raise ValueError(f"eta_band must lie in (0, 1), got {eta_band}")
        for k in range(samples):
            # fractional positions in (0, 1), coprime strides so eta and y decorrelate
            a = mpf((7 * k) % samples + 1) / (samples + 1)
            b = mpf((11 * k) % samples + 1) / (samples + 1)
            sign = 1 if k % 2 == 0 else -1
            if region == "any":
                eta = mpf("0.05") + a * mpf("1.95")
                y = sign * b * mpf("0.99") * mpmath.pi
            else:
                eta = limit * (low_frac + (high_frac - low_frac) * a)
                if region == "major":
                    y = sign * b * mpf("0.99") * 10 * eta
                else:
                    low = 10 * eta
                    y = sign * (low + b * mpf("0.99") * (mpmath.pi - low))
            points.append(mpc(eta, y))
    return points


def arc_check(
    name: str,
    samples: int = 50,
    t: int = 2,
    r: int = 1,
    precision: int = DEFAULT_PRECISION,
    points: Optional[List[mpc]] = None,
) -> List[ArcCheck]:
    """Run one validator over its deterministic grid (or the given points)."""
    if name not in ARC_VALIDATORS:
        raise ValueError(f"Unknown arc validator {name}; expected one of {sorted(ARC_VALIDATORS)}")
    validator = ARC_VALIDATORS[name]
    if points is None:
        points = sample_grid(validator.region, t, samples, precision, validator.eta_band)
    results = []
    with log.timed(f"arc_check {name} t={t} r={r} samples={len(points)}"):
        for z in points:
            if validator.needs_class:
                results.append(validator.func((r, t), z, precision))
            else:
                results.append(validator.func(z, precision, t=t))
    failed = sum(1 for result in results if not result.holds)
    if failed:
        log.error(f"arc_check {name}: {failed} of {len(results)} samples violate the bound")
    return results
