import sys
from pathlib import Path

import numpy as np
import pytest

# make tests/oracles.py importable regardless of invocation directory
sys.path.insert(0, str(Path(__file__).resolve().parent))


@pytest.fixture
def rng():
    return np.random.default_rng(20260815)


@pytest.fixture
def j2():
    """The workhorse two-dimensional signature matrix diag(1, -1)."""
    return np.diag([1.0, -1.0]).astype(complex)
