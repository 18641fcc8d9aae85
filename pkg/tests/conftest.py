import warnings

import numpy as np
import pytest
from hypothesis import settings

from xyqcr.lattice import make_grid
from xyqcr.modes import TwoSiteState

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

BELL = TwoSiteState(mz=0.0, cxx=1.0, cyy=-1.0, czz=1.0, cxy=0.0)
PRODUCT_UP = TwoSiteState(mz=1.0, cxx=0.0, cyy=0.0, czz=1.0, cxy=0.0)
MAXIMALLY_MIXED = TwoSiteState(0.0, 0.0, 0.0, 0.0, 0.0)


@pytest.fixture(scope="session")
def grid256():
    return make_grid(256)


@pytest.fixture(scope="session")
def grid2048():
    return make_grid(2048)


@pytest.fixture(autouse=True)
def _quiet_horizon_warnings():
    with warnings.catch_warnings():
        warnings.filterwarnings("ignore", message=".*scan horizon.*", category=RuntimeWarning)
        yield


def fields_array(s):
    return np.array(s.as_tuple(), dtype=float)


ACCEPTANCE_LINES = {}


@pytest.fixture
def acceptance():
    """Record one summary line per acceptance criterion: acceptance(n, passed, detail)."""

    def record(n, passed, detail):
        ACCEPTANCE_LINES[n] = f"criterion {n}: {'PASS' if passed else 'FAIL'}  {detail}"
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
