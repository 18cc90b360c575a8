import numpy as np
import pytest

from swdecay import _kernels


@pytest.fixture(params=sorted(_kernels.BACKENDS))
def backend(request):
    """Each available kernel backend in turn."""
    return _kernels.BACKENDS[request.param]


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def pytest_terminal_summary(terminalreporter):
    from pathlib import Path
    import sys
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.RESULTS, key=lambda s: int(s.split()[1])):
        terminalreporter.write_line(line)
