# stdlib
import sys
from typing import Callable

# third party
import pytest

# dpartitions absolute
import dpartitions.logger as log


@pytest.mark.parametrize("level", ["ERROR", "DEBUG", "CRITICAL"])
def test_loglevel(level: str) -> None:
    log.add(sink=sys.stderr, level=level)
    log.remove()


@pytest.mark.parametrize(
    ("level", "cbk"),
    [
        ("ERROR", log.error),
        ("DEBUG", log.debug),
        ("WARNING", log.warning),
        ("CRITICAL", log.critical),
    ],
)
def test_log_cbk(level: str, cbk: Callable) -> None:
    log.add(sink=sys.stderr, level=level)
    cbk("test")
    log.remove()


@pytest.mark.parametrize("verbosity", [0, 1, 2, 5])
def test_set_verbosity(verbosity: int) -> None:
    log.set_verbosity(verbosity)
    log.info("verbosity test")
    log.remove()


def test_collect_warnings() -> None:
    with log.collect_warnings() as collected:
        log.debug("not collected")
        log.warning("first")
        log.error("second")

    log.warning("after the block")

    assert collected == ["first", "second"]


def test_timed() -> None:
    with log.timed("block"):
        value = 1 + 1
    assert value == 2


def test_traceback_and_raise() -> None:
    with pytest.raises(ValueError):
        log.traceback_and_raise(ValueError("boom"))
