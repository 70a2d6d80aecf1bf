"""Thresholds N_t and counterexamples for D_{r,t}(n) >= D_{s,t}(n), r < s.

Beyond N_t the effective bound certifies D_{r,t}(n) >= D_{r+1,t}(n) through the
reduced inequality

    pi / (4t sqrt(6n')) I_1(x) >  pi^2 / (64 n' sqrt 2) I_2(x)
                                 + 233 pi^4 / (6912 sqrt 2 n'^2) I_4(x)
                                 + c_t / n' * exp((3 pi / 4) sqrt(n/3))
                                 + 2 Err_t(n),

with n' = n + 1/24, x = pi sqrt(n'/3) and
c_t = 1/(t sqrt 2) + 33 sqrt 2 / 16 + 314317 sqrt 2 / 48. Below N_t the
statement is settled by exact tables.

Evaluated as written, this inequality crosses over a few hundred to a few
thousand below the published thresholds in PUBLISHED_NT; table2 reports both.
"""
# stdlib
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

# third party
import mpmath
import pandas as pd
from mpmath import mpf
from pydantic import validate_arguments

# dpartitions absolute
import dpartitions.logger as log
from dpartitions.core.effective import effective_threshold, err_bound
from dpartitions.core.schema import InequalityReport, format_real
from dpartitions.core.series import d_tables_for_modulus
from dpartitions.core.specfun import GUARD_BITS, bessel_i, check_precision
from dpartitions.utils.constants import DEFAULT_PRECISION, SCAN_LIMIT, STABILITY_WINDOW
from dpartitions.utils.errors import PrecisionExhausted, ScanLimitError
from dpartitions.utils.parallel import map_ranges
from dpartitions.utils.serialization import DTableCache

# (r, s, n) patterns that occur as counterexamples for large enough t
FOOTNOTE_PATTERNS = frozenset({(1, 2, 2), (2, 3, 4), (2, 4, 4), (3, 4, 7), (4, 5, 8)})

# published thresholds; the reduced inequality as stated crosses over earlier
PUBLISHED_NT = {
    2: 108077,
    3: 112183,
    4: 115240,
    5: 117804,
    6: 120247,
    7: 122994,
    8: 126772,
    9: 133268,
    10: 147752,
}

Triple = Tuple[int, int, int]


def _require_modulus(t: int) -> None:
    if t < 2:
        raise ValueError(f"The inequality is stated for t >= 2, got t = {t}")


def _margin(t: int, n: int, precision: int) -> mpf:
    with mpmath.workprec(precision + GUARD_BITS):
        pi = mpmath.pi
        sqrt2 = mpmath.sqrt(2)
        n_shift = mpf(n) + mpf(1) / 24
        x = pi * mpmath.sqrt(n_shift / 3)
        inner = precision + GUARD_BITS

        lhs = pi / (4 * t * mpmath.sqrt(6 * n_shift)) * bessel_i(1, x, inner)
        coefficient = 1 / (t * sqrt2) + 33 * sqrt2 / 16 + 314317 * sqrt2 / 48
        rhs = (
            pi**2 / (64 * n_shift * sqrt2) * bessel_i(2, x, inner)
            + 233 * pi**4 / (6912 * sqrt2 * n_shift**2) * bessel_i(4, x, inner)
            + coefficient / n_shift * mpmath.exp(3 * pi / 4 * mpmath.sqrt(mpf(n) / 3))
            + 2 * err_bound(t, n, inner)
        )
        margin = lhs - rhs
    with mpmath.workprec(precision):
        return +margin


def reduced_margin(
    t: int, n: int, precision: int = DEFAULT_PRECISION, confirm: bool = True
) -> mpf:
    """
    LHS - RHS of the reduced inequality; positive means it holds at n.

    With confirm=True the sign is recomputed at twice the precision and
    PrecisionExhausted is raised if it changes.
    """
    _require_modulus(t)
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    check_precision(precision)
    margin = _margin(t, n, precision)
    if confirm:
        check = _margin(t, n, 2 * precision)
        if (margin > 0) != (check > 0):
            raise PrecisionExhausted(
                f"Sign of the reduced margin at t = {t}, n = {n} changes between "
                f"{precision} and {2 * precision} bits"
            )
    return margin


def _failures_in(t: int, precision: int, start: int, stop: int) -> List[int]:
    return [n for n in range(start, stop + 1) if _margin(t, n, precision) <= 0]


def _last_failure_above(
    t: int, failing: int, precision: int, scan_limit: int
) -> int:
    """
    From a failing n, bracket upward with doubling steps until the margin is
    positive, then bisect down to the last failure before that point.
    """
    step = 1
    passing = failing + step
    while True:
        if passing > scan_limit:
            raise ScanLimitError(
                f"No crossover of the reduced inequality for t = {t} below {scan_limit}"
            )
        if _margin(t, passing, precision) > 0:
            break
        failing = passing
        step *= 2
        passing = failing + step
    log.debug(f"N_t search t={t}: bracket ({failing}, {passing}]")
    while passing - failing > 1:
        mid = (failing + passing) // 2
        if _margin(t, mid, precision) > 0:
            passing = mid
        else:
            failing = mid
    return failing


def find_nt(
    t: int,
    precision: int = DEFAULT_PRECISION,
    scan_limit: int = SCAN_LIMIT,
    stability_window: int = STABILITY_WINDOW,
    n_jobs: Optional[int] = None,
) -> int:
    """
    N_t: the last n <= scan_limit where the reduced inequality fails, or the
    smallest admissible n > 400t^2/3 if it never fails there. The margin is
    confirmed positive on the following `stability_window` integers, and the
    decisive signs are confirmed at twice the precision.
    """
    _require_modulus(t)
    check_precision(precision)
    if 3 * scan_limit <= 400 * t * t:
        raise ValueError(f"scan_limit must exceed 400t^2/3 for t = {t}, got {scan_limit}")
    if stability_window < 1:
        raise ValueError(f"stability_window must be positive, got {stability_window}")

    lower = effective_threshold(t)
    last_failure: Optional[int] = None
    if _margin(t, lower, precision) <= 0:
        last_failure = _last_failure_above(t, lower, precision, scan_limit)

    with log.timed(f"N_t stability window t={t}"):
        while True:
            start = lower if last_failure is None else last_failure + 1
            stop = start + stability_window - 1
            if stop > scan_limit:
                raise ScanLimitError(
                    f"Stability window [{start}, {stop}] for t = {t} passes the scan limit {scan_limit}"
                )
            failures = map_ranges(
                _failures_in, start, stop, n_jobs=n_jobs, shared=(t, precision)
            )
            if not failures:
                break
            log.warning(
                f"Reduced inequality for t = {t} fails again at n = {max(failures)} "
                f"inside the stability window; resuming the search there"
            )
            last_failure = _last_failure_above(t, max(failures), precision, scan_limit)

    n_t = lower if last_failure is None else last_failure
    if last_failure is not None and reduced_margin(t, n_t, precision) > 0:
        raise PrecisionExhausted(f"Last failure n = {n_t} for t = {t} is not confirmed")
    if reduced_margin(t, n_t + 1, precision) <= 0:
        raise PrecisionExhausted(f"Crossover after n = {n_t} for t = {t} is not confirmed")
    log.info(f"N_{t} = {n_t} (stability window {stability_window})")
    return n_t


def _counterexamples_in(
    tables: Sequence[Sequence[int]],
    pairs: Sequence[Tuple[int, int]],
    start: int,
    stop: int,
) -> List[Triple]:
    found = []
    for n in range(start, stop + 1):
        for r, s in pairs:
            if tables[r - 1][n] < tables[s - 1][n]:
                found.append((r, s, n))
    return found


def scan_counterexamples(
    t: int,
    n_max: int,
    n_jobs: Optional[int] = None,
    adjacent_only: bool = False,
    workspace: Optional[Path] = None,
) -> List[Triple]:
    """
    Every (r, s, n) with 0 < r < s <= t, 1 <= n <= n_max and D_{r,t}(n) < D_{s,t}(n),
    in lexicographic order. adjacent_only restricts to s = r + 1.

    The d_tables for all residues are built once (through the D-table cache
    when a workspace is given) and shared read-only across workers.
    """
    _require_modulus(t)
    if n_max < 1:
        raise ValueError(f"n_max must be positive, got {n_max}")

    with log.timed(f"d_tables t={t} N={n_max}"):
        if workspace is not None:
            tables = DTableCache(workspace).d_tables(t, n_max)
        else:
            tables = d_tables_for_modulus(t, n_max)

    if adjacent_only:
        pairs = [(r, r + 1) for r in range(1, t)]
    else:
        pairs = [(r, s) for r in range(1, t) for s in range(r + 1, t + 1)]

    found = map_ranges(_counterexamples_in, 1, n_max, n_jobs=n_jobs, shared=(tables, pairs))
    return sorted(found)


def verify_corollary(
    t: int,
    exhaustive_to: Optional[int] = None,
    precision: int = DEFAULT_PRECISION,
    scan_limit: int = SCAN_LIMIT,
    stability_window: int = STABILITY_WINDOW,
    n_jobs: Optional[int] = None,
    workspace: Optional[Path] = None,
    full: bool = False,
) -> InequalityReport:
    """
    N_t together with the exact counterexample scan up to `exhaustive_to`.

    With full=True the scan runs up to the computed N_t and `exhaustive_to`
    is ignored.
    """
    _require_modulus(t)
    if not full and exhaustive_to is None:
        raise ValueError("exhaustive_to is required unless full=True")
    if t > 10:
        log.warning(f"t = {t} lies outside the range 2..10 the published thresholds cover")
    n_t = find_nt(
        t,
        precision=precision,
        scan_limit=scan_limit,
        stability_window=stability_window,
        n_jobs=n_jobs,
    )
    if full:
        exhaustive_to = n_t
    counterexamples = scan_counterexamples(
        t, exhaustive_to, n_jobs=n_jobs, workspace=workspace
    )
    report = InequalityReport(
        t=t,
        n_t=n_t,
        scan_limit_used=scan_limit,
        stability_window=stability_window,
        counterexamples=counterexamples,
        exhaustive_to=exhaustive_to,
    )
    if not report.full_reproduction:
        log.info(
            f"t = {t}: exact scan stops at {exhaustive_to} < N_t = {n_t}; reduced-scale reproduction"
        )
    return report


@validate_arguments
def table2(
    tmin: int = 2,
    tmax: int = 10,
    precision: int = DEFAULT_PRECISION,
    stability_window: int = STABILITY_WINDOW,
    scan_limit: int = SCAN_LIMIT,
    n_jobs: Optional[int] = None,
) -> pd.DataFrame:
    """N_t for t = tmin..tmax with the reduced margins on both sides of the crossover."""
    if tmin < 2 or tmax < tmin:
        raise ValueError(f"Invalid modulus range [{tmin}, {tmax}]")
    rows = []
    for t in range(tmin, tmax + 1):
        n_t = find_nt(
            t,
            precision=precision,
            scan_limit=scan_limit,
            stability_window=stability_window,
            n_jobs=n_jobs,
        )
        rows.append(
            {
                "t": t,
                "n_t": n_t,
                "window": stability_window,
                "margin_at_n_t": format_real(reduced_margin(t, n_t, precision, confirm=False), 8),
                "margin_after": format_real(reduced_margin(t, n_t + 1, precision, confirm=False), 8),
                "published_n_t": PUBLISHED_NT.get(t),
            }
        )
        if t in PUBLISHED_NT and n_t != PUBLISHED_NT[t]:
            log.info(f"N_{t} = {n_t} differs from the published {PUBLISHED_NT[t]}")
    columns = ["t", "n_t", "window", "margin_at_n_t", "margin_after", "published_n_t"]
    table = pd.DataFrame(rows, columns=columns)
    # keep ints and None as they are
    table["published_n_t"] = pd.Series([row["published_n_t"] for row in rows], dtype=object)
    return table
