import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from gfregular.core.field import tower  # noqa: E402
from gfregular.core.geometry import pg_matrix  # noqa: E402


@pytest.fixture
def fano():
    return pg_matrix(3, 2).matroid()


@pytest.fixture
def gf4():
    return tower(2)


@pytest.fixture
def gf9():
    return tower(3)
