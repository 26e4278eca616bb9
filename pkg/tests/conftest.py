import numpy as np
import pytest
from hypothesis import settings

from solrep.families import catenary_cylinder_data, grim_reaper_data, rotational_circle_data
from solrep.marcher import MarchConfig
from solrep.pipeline import solve_bjorling

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def grim_reaper_solution():
    data = grim_reaper_data(np.linspace(-1.0, 1.0, 401))
    return solve_bjorling(data, MarchConfig(epsilon=0.2, n_v=41))


@pytest.fixture(scope="session")
def hanging_roof_solution():
    data = catenary_cylinder_data(3.0, np.linspace(-0.5, 0.5, 401))
    return solve_bjorling(data, MarchConfig(epsilon=0.1, n_v=21))


@pytest.fixture(scope="session")
def rotational_solution():
    # h_v = 0.005: at 0.01 the v-truncation of the metric alone is about 1.5e-4
    t = np.linspace(0.0, 2.0 * np.pi, 1025)
    return solve_bjorling(rotational_circle_data(1.0, t), MarchConfig(epsilon=0.2, n_v=81), periodic=True)


_ACCEPTANCE = []


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line per acceptance criterion."""
    def record(number, ok, text):
        line = f"{'PASS' if ok else 'FAIL'}  criterion {number:>2}: {text}"
        _ACCEPTANCE.append((number, line))
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(_ACCEPTANCE, key=lambda e: e[0]):
            terminalreporter.write_line(line)
