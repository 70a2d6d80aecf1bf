# third party
import numpy as np
import pytest

# dpartitions absolute
from dpartitions.core.schema import CongruenceClass
from dpartitions.core.series import (
    QSeries,
    brute_force_d,
    d_single,
    d_table,
    d_tables_for_modulus,
    distinct_partitions,
    distinct_series,
    lambert_coeffs,
    series_mul,
)
from dpartitions.utils.errors import (
    CapacityError,
    OracleCapExceeded,
    TruncationMismatchError,
)


def test_distinct_series_values() -> None:
    series = distinct_series(10)

    assert series.trunc == 10
    assert series.tolist() == [1, 1, 1, 2, 2, 3, 4, 5, 6, 8, 10]
    assert series[5] == 3


def test_distinct_series_large_values_are_exact() -> None:
    series = distinct_series(200)

    assert series[100] == 444793
    assert series[200] == 487067746


def test_distinct_series_capacity() -> None:
    with pytest.raises(CapacityError):
        distinct_series(100, max_length=50)

    with pytest.raises(ValueError):
        distinct_series(-1)


@pytest.mark.parametrize(
    "cls,n,expected",
    [
        ((1, 3), 1, 1),
        ((1, 3), 6, -1),
        ((2, 2), 4, 0),
        ((1, 1), 6, 0),
        ((3, 4), 3, 1),
    ],
)
def test_lambert_coeffs(cls: tuple, n: int, expected: int) -> None:
    assert lambert_coeffs(cls, 10)[n] == expected


@pytest.mark.parametrize(
    "cls,n,expected",
    [
        ((1, 1), 6, 8),
        ((2, 4), 4, 0),
        ((3, 4), 4, 1),
        ((1, 2), 2, 0),
        ((2, 2), 2, 1),
        ((1, 3), 10, 11),
    ],
)
def test_d_table_values(cls: tuple, n: int, expected: int) -> None:
    assert d_table(cls, 12)[n] == expected


@pytest.mark.parametrize("t", [1, 2, 3, 4, 5, 6])
def test_d_table_matches_enumeration(t: int) -> None:
    N = 40
    distinct = distinct_series(N)
    for r in range(1, t + 1):
        table = d_table((r, t), N, distinct=distinct)
        assert table[0] == 0
        for n in range(N + 1):
            assert table[n] == brute_force_d((r, t), n)


@pytest.mark.parametrize("t", [2, 3, 7])
def test_residues_add_up_to_all_parts(t: int) -> None:
    N = 200
    total = d_table((1, 1), N)
    tables = d_tables_for_modulus(t, N)

    assert len(tables) == t
    for n in range(N + 1):
        assert sum(table[n] for table in tables) == total[n]


def test_d_tables_for_modulus_subset() -> None:
    tables = d_tables_for_modulus(4, 20, classes=[3, 1])

    assert tables[0] == d_table((3, 4), 20)
    assert tables[1] == d_table((1, 4), 20)


@pytest.mark.parametrize("t", [1, 2, 3, 4, 5])
def test_d_single_matches_table(t: int) -> None:
    N = 500
    distinct = distinct_series(N)
    for r in range(1, t + 1):
        table = d_table((r, t), N, distinct=distinct)
        for n in range(N + 1):
            assert d_single((r, t), n, distinct) == table[n]


def test_d_single_large_class() -> None:
    distinct = distinct_series(150)

    assert d_single((3, 7), 150, distinct) == d_table((3, 7), 150, distinct=distinct)[150]


@pytest.mark.parametrize("t", [2, 3, 5, 10])
def test_d_table_non_negative(t: int) -> None:
    for table in d_tables_for_modulus(t, 300):
        assert all(value >= 0 for value in table)


def test_d_single_needs_long_enough_table() -> None:
    with pytest.raises(TruncationMismatchError):
        d_single((1, 2), 20, distinct_series(10))


def test_d_table_reuses_longer_distinct_table() -> None:
    distinct = distinct_series(40)

    assert d_table((1, 3), 25, distinct=distinct) == d_table((1, 3), 25)

    with pytest.raises(TruncationMismatchError):
        d_table((1, 3), 50, distinct=distinct)


def test_distinct_partitions() -> None:
    partitions = list(distinct_partitions(7))

    assert sorted(partitions) == sorted([(7,), (6, 1), (5, 2), (4, 3), (4, 2, 1)])
    assert list(distinct_partitions(0)) == [()]
    assert len(list(distinct_partitions(25))) == distinct_series(25)[25]


def test_brute_force_cap() -> None:
    with pytest.raises(OracleCapExceeded):
        brute_force_d((1, 2), 61)

    with pytest.raises(CapacityError):
        brute_force_d((1, 2), 30, cap=20)

    assert brute_force_d((1, 2), 20, cap=20) == d_table((1, 2), 20)[20]


def test_qseries_arithmetic() -> None:
    a = QSeries([1, 2, 3])
    b = QSeries([0, 1, -1])

    assert (a + b).tolist() == [1, 3, 2]
    assert (a - b).tolist() == [1, 1, 4]
    assert (a * b).tolist() == [0, 1, 1]
    assert series_mul(a, QSeries.identity(2)) == a
    assert (a * QSeries.zero(2)) == QSeries.zero(2)
    assert a.truncate(1).tolist() == [1, 2]
    assert hash(a) == hash(QSeries([1, 2, 3]))


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_series_mul_symmetric(seed: int) -> None:
    rng = np.random.default_rng(seed)
    a = QSeries([int(v) for v in rng.integers(-50, 50, size=40)])
    b = QSeries([int(v) for v in rng.integers(-50, 50, size=40)])
    c = QSeries([int(v) for v in rng.integers(-50, 50, size=40)])

    assert series_mul(a, b) == series_mul(b, a)
    assert series_mul(a, b + c) == series_mul(a, b) + series_mul(a, c)


def test_qseries_truncation_mismatch() -> None:
    with pytest.raises(TruncationMismatchError):
        QSeries([1, 2]) + QSeries([1, 2, 3])

    with pytest.raises(TruncationMismatchError):
        QSeries([1, 2]).truncate(5)


def test_qseries_is_read_only() -> None:
    series = distinct_series(5)

    with pytest.raises(ValueError):
        series.coeffs[0] = 7


def test_qseries_big_integers() -> None:
    big = 10**40
    series = QSeries([big, 1])

    assert (series * series).tolist() == [big * big, 2 * big]


@pytest.mark.parametrize("r,t", [(0, 3), (4, 3), (-1, 2), (1, 0)])
def test_invalid_class(r: int, t: int) -> None:
    with pytest.raises(ValueError):
        CongruenceClass(r=r, t=t)

    with pytest.raises(ValueError):
        d_table((r, t), 5)


def test_congruence_class() -> None:
    cls = CongruenceClass(r=3, t=3)

    assert cls.contains(6)
    assert not cls.contains(4)
    assert str(cls) == "(3,3)"
    assert cls.ratio() == (3, 3)
