import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from helpers import (  # noqa: E402
    canonical_scenario,
    corner_scenario,
    neutral_scenario,
)


@pytest.fixture
def canonical():
    return canonical_scenario()


@pytest.fixture
def corner():
    return corner_scenario()


@pytest.fixture
def neutral():
    return neutral_scenario()


@pytest.fixture
def data_dir():
    return Path(__file__).parent / "data"
