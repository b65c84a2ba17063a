# tests/conftest.py
import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from qarith import QContext  # noqa: E402


@pytest.fixture
def ctx():
    return QContext(q=0.5)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def close(a, b, rel=1e-10, abs_tol=0.0):
    """Relative closeness against the larger modulus, for complex scalars."""
    return abs(complex(a) - complex(b)) <= rel * max(abs(complex(a)), abs(complex(b))) + abs_tol
