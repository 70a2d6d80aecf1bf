"""Exact coefficients of the distinct-parts generating functions.

The generating function of D_{r,t}(n) factors as

    D_{r,t}(q) = xi(q) * L_{r,t}(q),   xi(q) = prod_{m>=1} (1 + q^m),
    L_{r,t}(q) = sum_{k>=0} q^{kt+r} / (1 + q^{kt+r}),

so D_{r,t}(n) is a truncated Cauchy product of two integer sequences.
"""
# stdlib
from typing import Any, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

# third party
import numpy as np
from pydantic import validate_arguments

# dpartitions absolute
import dpartitions.logger as log
from dpartitions.core.schema import CongruenceClass
from dpartitions.utils.constants import MAX_SERIES_LENGTH, ORACLE_CAP
from dpartitions.utils.errors import (
    CapacityError,
    OracleCapExceeded,
    TruncationMismatchError,
)

ClassLike = Union[CongruenceClass, Tuple[int, int]]


def as_class(cls: ClassLike) -> CongruenceClass:
    if isinstance(cls, CongruenceClass):
        return cls
    r, t = cls
    return CongruenceClass(r=r, t=t)


def _check_capacity(N: int, max_length: Optional[int]) -> None:
    if N < 0:
        raise ValueError(f"Truncation order must be non-negative, got {N}")
    cap = MAX_SERIES_LENGTH if max_length is None else max_length
    if N + 1 > cap:
        raise CapacityError(
            f"Series of length {N + 1} exceeds the configured maximum {cap}"
        )


class QSeries:
    """
    A power series truncated after q^trunc, with exact integer coefficients.

    Coefficients are stored in a read-only numpy object array of Python ints,
    so values of any size are exact. Arithmetic requires equal truncation.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Union[Sequence[int], np.ndarray]) -> None:
        arr = np.array([int(c) for c in coeffs], dtype=object)
        if arr.ndim != 1 or len(arr) == 0:
            raise ValueError("A QSeries needs at least the constant coefficient")
        arr.setflags(write=False)
        self._coeffs = arr

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "QSeries":
        # trusted path: arr is a fresh object array of ints
        obj = cls.__new__(cls)
        arr.setflags(write=False)
        obj._coeffs = arr
        return obj

    @classmethod
    def identity(cls, trunc: int) -> "QSeries":
        arr = np.zeros(trunc + 1, dtype=object)
        arr[0] = 1
        return cls._wrap(arr)

    @classmethod
    def zero(cls, trunc: int) -> "QSeries":
        return cls._wrap(np.zeros(trunc + 1, dtype=object))

    @property
    def trunc(self) -> int:
        return len(self._coeffs) - 1

    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs

    def tolist(self) -> List[int]:
        return [int(c) for c in self._coeffs]

    def truncate(self, N: int) -> "QSeries":
        if N > self.trunc:
            raise TruncationMismatchError(
                f"Cannot extend a series truncated at {self.trunc} to {N}"
            )
        return QSeries._wrap(self._coeffs[: N + 1].copy())

    def __len__(self) -> int:
        return len(self._coeffs)

    def __getitem__(self, n: int) -> int:
        return int(self._coeffs[n])

    def __iter__(self) -> Iterator[int]:
        return (int(c) for c in self._coeffs)

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, QSeries):
            return False
        return self.trunc == other.trunc and bool(
            np.all(self._coeffs == other._coeffs)
        )

    def __hash__(self) -> int:
        return hash(tuple(self.tolist()))

    def __add__(self, other: "QSeries") -> "QSeries":
        _require_same_trunc(self, other)
        return QSeries._wrap(self._coeffs + other._coeffs)

    def __sub__(self, other: "QSeries") -> "QSeries":
        _require_same_trunc(self, other)
        return QSeries._wrap(self._coeffs - other._coeffs)

    def __mul__(self, other: "QSeries") -> "QSeries":
        return series_mul(self, other)

    def __repr__(self) -> str:
        head = ", ".join(str(c) for c in self.tolist()[:8])
        tail = ", ..." if self.trunc >= 8 else ""
        return f"QSeries(trunc={self.trunc}, [{head}{tail}])"


def _require_same_trunc(a: QSeries, b: QSeries) -> None:
    if a.trunc != b.trunc:
        raise TruncationMismatchError(
            f"Truncation mismatch: {a.trunc} != {b.trunc}"
        )


@validate_arguments
def distinct_series(N: int, max_length: Optional[int] = None) -> QSeries:
    """Truncation of prod_{m>=1} (1 + q^m) after q^N.

    The coefficient of q^n is the number of partitions of n into distinct parts.
    """
    _check_capacity(N, max_length)
    coeffs = np.zeros(N + 1, dtype=object)
    coeffs[0] = 1
    with log.timed(f"distinct_series N={N}"):
        for m in range(1, N + 1):
            # right-hand side is evaluated before assignment, so old values are used
            coeffs[m:] = coeffs[m:] + coeffs[: N + 1 - m]
    return QSeries._wrap(coeffs)


def lambert_coeffs(cls: ClassLike, N: int, max_length: Optional[int] = None) -> QSeries:
    """Coefficients of L_{r,t}(q) = sum_k q^{kt+r} / (1 + q^{kt+r}).

    Expanding each summand geometrically, the coefficient of q^n is the signed
    divisor sum over d | n with d = r (mod t) of (-1)^{n/d - 1}.
    """
    cls = as_class(cls)
    _check_capacity(N, max_length)
    coeffs = np.zeros(N + 1, dtype=object)
    d = cls.r
    while d <= N:
        # multiples j*d, j >= 1, with sign (-1)^(j-1)
        coeffs[d::2 * d] += 1
        coeffs[2 * d :: 2 * d] -= 1
        d += cls.t
    return QSeries._wrap(coeffs)


def series_mul(a: QSeries, b: QSeries) -> QSeries:
    """Truncated Cauchy product."""
    _require_same_trunc(a, b)
    N = a.trunc
    out = np.zeros(N + 1, dtype=object)
    # iterate over the sparser factor
    lhs, rhs = (a, b) if np.count_nonzero(a.coeffs) <= np.count_nonzero(b.coeffs) else (b, a)
    rc = rhs.coeffs
    for m, c in enumerate(lhs.coeffs):
        if c == 0:
            continue
        out[m:] += c * rc[: N + 1 - m]
    return QSeries._wrap(out)


def d_table(
    cls: ClassLike,
    N: int,
    distinct: Optional[QSeries] = None,
    max_length: Optional[int] = None,
) -> List[int]:
    """[D_{r,t}(0), ..., D_{r,t}(N)] from the factorization xi * L.

    A precomputed distinct_series of truncation >= N can be passed to share
    the O(N^2) product across classes of the same modulus.
    """
    cls = as_class(cls)
    _check_capacity(N, max_length)
    if distinct is None:
        distinct = distinct_series(N, max_length=max_length)
    elif distinct.trunc > N:
        distinct = distinct.truncate(N)
    elif distinct.trunc < N:
        raise TruncationMismatchError(
            f"distinct-partition table truncated at {distinct.trunc}, need {N}"
        )

    with log.timed(f"d_table cls={cls} N={N}"):
        product = series_mul(distinct, lambert_coeffs(cls, N, max_length=max_length))
    return product.tolist()


def d_single(cls: ClassLike, n: int, distinct: QSeries) -> int:
    """D_{r,t}(n) for a single n.

    Uses D_{r,t}(n) = sum_{k>=0} sum_{j>=1} (-1)^{j-1} q_D(n - j(kt + r)),
    where q_D is the distinct-partition count read from `distinct`.
    """
    cls = as_class(cls)
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    if distinct.trunc < n:
        raise TruncationMismatchError(
            f"distinct-partition table truncated at {distinct.trunc}, need {n}"
        )
    qd = distinct.coeffs
    total = 0
    d = cls.r
    while d <= n:
        sign = 1
        for m in range(n - d, -1, -d):
            total += qd[m] if sign > 0 else -qd[m]
            sign = -sign
        d += cls.t
    return int(total)


def distinct_partitions(n: int, _largest: Optional[int] = None) -> Iterator[Tuple[int, ...]]:
    """Enumerate the partitions of n into distinct parts, parts in decreasing order."""
    largest = n if _largest is None else _largest
    if n == 0:
        yield ()
        return
    for part in range(min(n, largest), 0, -1):
        # the remaining parts 1..part-1 must be able to cover n - part
        if part * (part + 1) // 2 < n:
            break
        for rest in distinct_partitions(n - part, part - 1):
            yield (part,) + rest


def brute_force_d(cls: ClassLike, n: int, cap: Optional[int] = None) -> int:
    """D_{r,t}(n) by direct enumeration. Independent of the series route."""
    cls = as_class(cls)
    limit = ORACLE_CAP if cap is None else cap
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    if n > limit:
        raise OracleCapExceeded(f"Enumeration oracle is capped at n = {limit}, got {n}")
    return sum(
        sum(1 for part in partition if cls.contains(part))
        for partition in distinct_partitions(n)
    )


def d_tables_for_modulus(
    t: int, N: int, classes: Optional[Iterable[int]] = None
) -> List[List[int]]:
    """d_table for every r in 1..t (or the given subset), sharing one distinct_series.

    Entry i of the result belongs to the i-th requested residue.
    """
    residues = list(range(1, t + 1)) if classes is None else list(classes)
    distinct = distinct_series(N)
    return [d_table((r, t), N, distinct=distinct) for r in residues]
