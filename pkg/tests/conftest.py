import sys
from pathlib import Path

import pytest

# Add repo root to sys.path for imports
repo_root = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(repo_root))

from modules.amalgam_core import reduce  # noqa: E402
from modules.instances import make_instance  # noqa: E402
from modules.parsers import parse_word  # noqa: E402


@pytest.fixture(scope="session")
def dense():
    return make_instance("dense", 5)


@pytest.fixture(scope="session")
def heisenberg():
    return make_instance("heisenberg", 3)


@pytest.fixture(scope="session")
def cyclic():
    return make_instance("cyclic", 2, exponent=3)


@pytest.fixture(scope="session")
def el():
    """el("h1(1/5) h0(2)", sys) -> reduced GroupElement."""

    def build(src, sys):
        return reduce(parse_word(src, sys), sys)

    return build
