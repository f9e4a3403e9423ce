import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from ginibre3d import quaternion as qt

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

finite = st.floats(min_value=-5.0, max_value=5.0, allow_nan=False, allow_infinity=False)
radius = st.floats(min_value=0.1, max_value=5.0)


@st.composite
def quaternions(draw):
    return qt.quat(draw(finite), draw(finite), draw(finite), draw(finite))


@st.composite
def pure_quaternions(draw, min_norm=0.1, max_norm=5.0):
    v = np.array([draw(finite), draw(finite), draw(finite)])
    n = np.linalg.norm(v)
    if n < 1e-6:
        v = np.array([1.0, 0.0, 0.0])
        n = 1.0
    r = draw(st.floats(min_value=min_norm, max_value=max_norm))
    return qt.pure(v / n * r)


@st.composite
def unit_quaternions(draw):
    q = draw(quaternions())
    n = qt.norm(q)
    return qt.ONE.copy() if n < 1e-6 else q / n


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[cid].line())
