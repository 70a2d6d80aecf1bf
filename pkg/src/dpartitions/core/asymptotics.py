"""Main term of D_{r,t}(n) and the convergence ratios Q_r(n) = D_{r,t}(n) / main term."""
# stdlib
from typing import Iterable, List, Optional

# third party
import mpmath
import pandas as pd
from mpmath import mpf

# dpartitions absolute
import dpartitions.logger as log
from dpartitions.core.schema import MainTermValue
from dpartitions.core.series import ClassLike, QSeries, as_class, d_single, distinct_series
from dpartitions.core.specfun import GUARD_BITS, check_precision
from dpartitions.utils.constants import DEFAULT_PRECISION

TABLE1_NS = (10, 100, 1000, 10000)
TABLE1_T = 3


def main_term(
    cls: ClassLike, n: int, precision: int = DEFAULT_PRECISION, terms: int = 2
) -> MainTermValue:
    """
    3^{1/4} e^{pi sqrt(n/3)} / (2 pi t n^{1/4}) * (log 2 + c_{r,t} n^{-1/2}),
    c_{r,t} = sqrt(3) log 2 / (8 pi) - pi / (4 sqrt 3) * (r - t/2).

    terms=1 keeps only the log 2 of the bracket.
    """
    cls = as_class(cls)
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if terms not in (1, 2):
        raise ValueError(f"terms must be 1 or 2, got {terms}")
    check_precision(precision)

    with mpmath.workprec(precision + GUARD_BITS):
        n_mp = mpf(n)
        r, t = mpf(cls.r), mpf(cls.t)
        sqrt3 = mpmath.sqrt(3)
        log2 = mpmath.log(2)
        prefactor = (
            mpmath.root(3, 4)
            * mpmath.exp(mpmath.pi * mpmath.sqrt(n_mp / 3))
            / (2 * mpmath.pi * t * mpmath.root(n_mp, 4))
        )
        bracket = log2
        if terms == 2:
            correction = sqrt3 * log2 / (8 * mpmath.pi) - mpmath.pi / (4 * sqrt3) * (r - t / 2)
            bracket += correction / mpmath.sqrt(n_mp)
        value = prefactor * bracket
    with mpmath.workprec(precision):
        value = +value
    return MainTermValue(n=n, cls=cls, value=value, terms_used=terms)


def q_ratio(
    cls: ClassLike,
    n: int,
    precision: int = DEFAULT_PRECISION,
    distinct: Optional[QSeries] = None,
) -> mpf:
    """D_{r,t}(n) / main_term(cls, n) with the two-term bracket."""
    cls = as_class(cls)
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if distinct is None:
        distinct = distinct_series(n)
    exact = d_single(cls, n, distinct)
    term = main_term(cls, n, precision)
    with mpmath.workprec(precision):
        return mpf(exact) / term.value


def q_table(
    t: int = TABLE1_T,
    ns: Iterable[int] = TABLE1_NS,
    precision: int = DEFAULT_PRECISION,
    distinct: Optional[QSeries] = None,
) -> pd.DataFrame:
    """
    Long-format table of Q_r(n) for r = 1..t and every n in `ns`.

    Columns: n, r, t, d_exact, main_term, q. One distinct-partition table up to
    max(ns) is shared by every entry.
    """
    ns = sorted(set(int(n) for n in ns))
    if not ns:
        raise ValueError("q_table needs at least one n")
    if ns[0] < 1:
        raise ValueError(f"n must be positive, got {ns[0]}")
    if distinct is None:
        distinct = distinct_series(ns[-1])

    rows: List[dict] = []
    with log.timed(f"q_table t={t} ns={ns}"):
        for n in ns:
            for r in range(1, t + 1):
                cls = as_class((r, t))
                exact = d_single(cls, n, distinct)
                term = main_term(cls, n, precision)
                with mpmath.workprec(precision):
                    q = mpf(exact) / term.value
                rows.append(
                    {
                        "n": n,
                        "r": r,
                        "t": t,
                        "d_exact": exact,
                        "main_term": term.value,
                        "q": q,
                    }
                )
    return pd.DataFrame(rows, columns=["n", "r", "t", "d_exact", "main_term", "q"])


def q_table_wide(table: pd.DataFrame, digits: int = 6) -> pd.DataFrame:
    """Layout with one row per n and one Q_r column per residue, values as fixed decimals."""
    wide = table.pivot(index="n", columns="r", values="q")
    wide.columns = [f"Q_{r}(n)" for r in wide.columns]
    wide = wide.apply(lambda column: column.map(lambda v: f"{float(v):.{digits}f}"))
    return wide.reset_index()
