import csv
import json
import warnings
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from wsdirac import PotentialParams, SymmetryCase

DATA = Path(__file__).parent / "data"

settings.register_profile(
    "repo", deadline=None, derandomize=True, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

# Reference-table parameters: V0 = 2.2, m = 15, A = -5, a = 1.425, hbar = c = 1
V0, MASS, A_SPIN, A_WIDTH = 2.2, 15.0, -5.0, 1.425
R0_DEFAULT = 10 * A_WIDTH
TABLE_Q = (1.0, 2.0, -1.0, -2.0)


@pytest.fixture(autouse=True)
def _quiet_radius_warning():
    with warnings.catch_warnings():
        warnings.filterwarnings("ignore", message="R0 not given")
        yield


@pytest.fixture(scope="session")
def derived():
    return json.loads((DATA / "derived_fixtures.json").read_text())


@pytest.fixture(scope="session")
def swave_reference():
    """Rows n, then (E1, E2) per q in TABLE_Q, as printed (strings kept)."""
    with open(DATA / "ws_swave_reference.csv", newline="") as fh:
        return list(csv.DictReader(fh))


def table_params(q: float, R0: float | None = R0_DEFAULT) -> PotentialParams:
    return PotentialParams(V0, q, A_WIDTH, R0)


def spin_case() -> SymmetryCase:
    return SymmetryCase("spin", A_SPIN, MASS)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(results):
        terminalreporter.write_line(results[num])
