import sys
from pathlib import Path

import pytest

HERE = Path(__file__).parent
sys.path.insert(0, str(HERE))

FANS = HERE.parent / "data" / "fans"


@pytest.fixture(scope="session")
def fans_dir():
    return FANS


@pytest.fixture(scope="session")
def x1():
    from toricglue.toric import load_fan

    return load_fan(FANS / "X1.json")


@pytest.fixture(scope="session")
def x4():
    from toricglue.toric import load_fan

    return load_fan(FANS / "X4.json")
