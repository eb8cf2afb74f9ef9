from pathlib import Path

import numpy as np
import pytest

from credimatch.combination import dempster
from credimatch.evidence import frame_new, mass_new

DATA = Path(__file__).parent / "data"


@pytest.fixture
def theta3():
    return frame_new(["θ1", "θ2", "θ3"])


@pytest.fixture
def bba1(theta3):
    f = theta3
    return mass_new(f, {f.parse("θ1"): 0.4, f.parse("θ2|θ3"): 0.2, f.full: 0.4})


@pytest.fixture
def bba2(theta3):
    f = theta3
    return mass_new(f, {f.parse("θ2"): 0.2, f.full: 0.8})


@pytest.fixture
def combined(bba1, bba2):
    return dempster(bba1, bba2)


@pytest.fixture
def data_dir():
    return DATA


def random_mass(rng, frame, max_focal=5):
    """Random normalized mass function with up to ``max_focal`` focal sets."""
    n_focal = int(rng.integers(1, max_focal + 1))
    masks = rng.integers(1, frame.full + 1, size=n_focal)
    weights = rng.random(n_focal) + 1e-3
    weights /= weights.sum()
    return mass_new(frame, [(int(k), float(w)) for k, w in zip(masks, weights)])


@pytest.fixture
def rng():
    return np.random.default_rng(20241018)


_acceptance: dict[str, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion reported in the summary")


def pytest_runtest_logreport(report):
    marker = dict(report.user_properties).get("criterion")
    if marker is None:
        return
    if report.when == "call" or report.outcome != "passed":
        _acceptance[report.nodeid] = (marker, report.outcome)


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark:
            item.user_properties.append(("criterion", mark.args[0]))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for label, outcome in sorted(_acceptance.values()):
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{status}  {label}")
