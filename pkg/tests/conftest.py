import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from helpers import BARBELL, BRIDGED_CYCLE, complete, graph_of  # noqa: E402


@pytest.fixture
def barbell():
    return graph_of(BARBELL)


@pytest.fixture
def bridged_cycle():
    return graph_of(BRIDGED_CYCLE)


@pytest.fixture
def k4():
    return complete(4)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
