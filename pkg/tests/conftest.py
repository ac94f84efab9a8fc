import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

CHOOSE_TEXTS = ["We cho", "We choose", "We choose to go"]


@pytest.fixture
def choose_texts():
    return list(CHOOSE_TEXTS)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
