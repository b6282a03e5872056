import sys
import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from qcl.algebra import BiQuat

settings.register_profile("qcl", max_examples=60, deadline=None)
settings.load_profile("qcl")

finite = st.floats(min_value=-3, max_value=3, allow_nan=False, allow_infinity=False)


@st.composite
def quats(draw):
    return BiQuat(*[draw(finite) for _ in range(4)])


@st.composite
def biquats(draw):
    return BiQuat(*[complex(draw(finite), draw(finite)) for _ in range(4)])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
