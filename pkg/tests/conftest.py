import math

import numpy as np
import pytest
from hypothesis import strategies as st

from lnrbounds.geometry import UnitVec3

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def unit_vectors():
    comp = st.floats(-1.0, 1.0, allow_nan=False, allow_infinity=False)
    return (
        st.tuples(comp, comp, comp)
        .filter(lambda v: math.sqrt(sum(c * c for c in v)) > 1e-3)
        .map(UnitVec3.of)
    )


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
