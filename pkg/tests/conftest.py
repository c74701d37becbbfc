import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from symreeb.reeb import HypersurfaceModel, chord_path, find_brake_chords

settings.register_profile("default", deadline=None, max_examples=25,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", deadline=None, max_examples=200,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

SQRT2 = float(np.sqrt(2.0))

# acceptance bookkeeping: criterion number -> (title, outcome, detail)
_ACCEPTANCE = {}


def pytest_runtest_makereport(item, call):
    crit = getattr(item.function, "criterion", None)
    if crit is None or call.when != "call":
        return
    num, title = crit
    outcome = "PASS" if call.excinfo is None else "FAIL"
    detail = getattr(item.function, "detail", "")
    _ACCEPTANCE[num] = (title, outcome, detail)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_ACCEPTANCE):
        title, outcome, detail = _ACCEPTANCE[num]
        line = f"[{outcome}] criterion {num}: {title}"
        if detail:
            line += f" ({detail})"
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def ellipsoid():
    return HypersurfaceModel.ellipsoid([1.0, SQRT2])


@pytest.fixture(scope="session")
def ellipsoid_search(ellipsoid):
    return find_brake_chords(ellipsoid)


@pytest.fixture(scope="session")
def ellipsoid_paths(ellipsoid, ellipsoid_search):
    return [chord_path(ellipsoid, ch, f"c{i}") for i, ch in enumerate(ellipsoid_search.chords, 1)]


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)
