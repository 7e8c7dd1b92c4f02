import sys
from pathlib import Path

import hypothesis
import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

hypothesis.settings.register_profile("ci", max_examples=60, deadline=None)
hypothesis.settings.load_profile("ci")

_criteria: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when not in ("setup", "call"):
        return
    number, title = marker.args
    entry = _criteria.setdefault(number, {"title": title, "ok": True, "ran": False})
    if call.excinfo is not None:
        entry["ok"] = False
    if call.when == "call":
        entry["ran"] = True


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        e = _criteria[number]
        status = "PASS" if e["ok"] and e["ran"] else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {number:2d}: {e['title']}")


def disk_mask(size, radius, center=None):
    c = (size - 1) / 2.0 if center is None else center
    y, x = np.mgrid[0:size, 0:size]
    return (x - c) ** 2 + (y - c) ** 2 <= radius**2


@pytest.fixture
def disk128():
    """128x128 render of a radius-30 disk: (image with 0.9 / 0.1, mask)."""
    mask = disk_mask(128, 30)
    return np.where(mask, 0.9, 0.1), mask


@pytest.fixture
def worked_example_mask():
    # one of the 5x5 masks found by the exhaustive search in oracles.worked_example_masks
    return np.array(
        [
            [1, 1, 1, 1, 1],
            [0, 1, 1, 1, 1],
            [0, 0, 1, 0, 1],
            [0, 0, 1, 1, 0],
            [0, 0, 1, 1, 1],
        ],
        dtype=bool,
    )
