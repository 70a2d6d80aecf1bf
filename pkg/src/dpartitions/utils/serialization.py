# stdlib
from pathlib import Path
from typing import Any, List, Optional, Union

# third party
import cloudpickle
from pydantic import validate_arguments

# dpartitions absolute
import dpartitions.logger as log
from dpartitions.core.series import QSeries, d_table, distinct_series
from dpartitions.version import MAJOR_VERSION


def save(obj: Any) -> bytes:
    return cloudpickle.dumps(obj)


def load(buff: bytes) -> Any:
    return cloudpickle.loads(buff)


def save_to_file(path: Union[str, Path], obj: Any) -> Any:
    with open(path, "wb") as f:
        return cloudpickle.dump(obj, f)


def load_from_file(path: Union[str, Path]) -> Any:
    with open(path, "rb") as f:
        return cloudpickle.load(f)


def snapshot_dict(kind: str, trunc: int, coeffs: List[int]) -> dict:
    return {
        "source": "dpartitions",
        "version": MAJOR_VERSION,
        "kind": kind,
        "trunc": trunc,
        "coeffs": list(coeffs),
    }


def load_snapshot(representation: Any) -> dict:
    if (
        not isinstance(representation, dict)
        or representation.get("source") != "dpartitions"
    ):
        raise ValueError("Invalid dpartitions snapshot")

    if representation.get("version") != MAJOR_VERSION:
        raise RuntimeError(
            f"Invalid dpartitions snapshot version. Current version is {MAJOR_VERSION}, "
            f"but the table was saved using version {representation.get('version')}"
        )
    if len(representation["coeffs"]) != representation["trunc"] + 1:
        raise ValueError("Corrupted dpartitions snapshot: length does not match trunc")
    return representation


class DTableCache:
    """
    Versioned on-disk cache of exact coefficient tables.

    Each table lives in `workspace/dtable_<kind>_<r>_<t>.bkp`. A snapshot from
    another version, or one shorter than requested, is recomputed and
    overwritten; a longer one is truncated on load.
    """

    @validate_arguments
    def __init__(self, workspace: Path) -> None:
        self.workspace = workspace
        self.workspace.mkdir(parents=True, exist_ok=True)

    def path(self, kind: str, r: int = 0, t: int = 0) -> Path:
        return self.workspace / f"dtable_{kind}_{r}_{t}.bkp"

    def read(self, kind: str, N: int, r: int = 0, t: int = 0) -> Optional[List[int]]:
        path = self.path(kind, r, t)
        if not path.exists():
            return None
        try:
            snapshot = load_snapshot(load_from_file(path))
        except BaseException as e:
            log.warning(f"Ignoring cached table {path.name}: {e}")
            return None
        if snapshot["trunc"] < N:
            log.debug(f"Cached table {path.name} stops at {snapshot['trunc']} < {N}")
            return None
        return snapshot["coeffs"][: N + 1]

    def write(self, kind: str, coeffs: List[int], r: int = 0, t: int = 0) -> Path:
        path = self.path(kind, r, t)
        save_to_file(path, snapshot_dict(kind, len(coeffs) - 1, coeffs))
        log.debug(f"Saved table {path.name} up to {len(coeffs) - 1}")
        return path

    def distinct(self, N: int) -> QSeries:
        """distinct_series(N), through the cache."""
        cached = self.read("distinct", N)
        if cached is not None:
            return QSeries(cached)
        series = distinct_series(N)
        self.write("distinct", series.tolist())
        return series

    def d_table(self, r: int, t: int, N: int, distinct: Optional[QSeries] = None) -> List[int]:
        """d_table((r, t), N), through the cache."""
        cached = self.read("d", N, r, t)
        if cached is not None:
            return cached
        if distinct is None:
            distinct = self.distinct(N)
        table = d_table((r, t), N, distinct=distinct)
        self.write("d", table, r, t)
        return table

    def d_tables(self, t: int, N: int) -> List[List[int]]:
        tables: List[Optional[List[int]]] = [self.read("d", N, r, t) for r in range(1, t + 1)]
        if all(table is not None for table in tables):
            return tables  # type: ignore
        distinct = self.distinct(N)
        return [
            table if table is not None else self.d_table(r, t, N, distinct=distinct)
            for r, table in zip(range(1, t + 1), tables)
        ]
