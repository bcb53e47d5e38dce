import numpy as np
import pytest

from qinfo.rng import stream


@pytest.fixture
def rng():
    """Fresh deterministic generator per test."""
    return stream(20240811, "tests")


def bell_state() -> np.ndarray:
    return np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
