# stdlib
import shutil
from pathlib import Path
from typing import Generator

# third party
import pytest

# dpartitions absolute
from dpartitions.core.effective import _v_segment_integral


@pytest.fixture(autouse=True, scope="session")
def run_before_tests() -> Generator:
    _v_segment_integral.cache_clear()

    yield

    # cleanup after test
    workspace = Path("workspace")
    if workspace.exists():
        shutil.rmtree(workspace, ignore_errors=True)
