import numpy as np
import pytest

from qmul import sim


@pytest.fixture(params=["cython", "python"])
def backend(request):
    """Run a test once per kernel backend, restoring the default after."""
    before = sim.active_backend()
    try:
        sim.use_backend(request.param)
    except ImportError:
        pytest.skip("compiled kernels not built")
    yield request.param
    sim.use_backend(before)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
