import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from vilenkin.core import CylinderFunction, RadixSystem
from vilenkin.kernels import available_backends

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

WALSH = RadixSystem.constant(2, 10)
MIXED = RadixSystem((2, 3, 4, 5, 2, 3))


@st.composite
def radix_systems(draw, max_cells=512, max_radix=7, min_depth=1):
    m = []
    size = 1
    while True:
        q = draw(st.integers(2, max_radix))
        if size * q > max_cells:
            break
        m.append(q)
        size *= q
        if len(m) >= min_depth and draw(st.booleans()):
            break
    if len(m) < min_depth:
        m = [2] * min_depth
    return RadixSystem(tuple(m))


def random_function(rs, d, seed):
    rng = np.random.default_rng(seed)
    n = rs.M[d]
    return CylinderFunction(rs, d, rng.standard_normal(n) + 1j * rng.standard_normal(n))


@pytest.fixture(params=available_backends())
def backend(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
