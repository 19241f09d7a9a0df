import numpy as np
import pytest

from gptasym.domain_functions import DiskDomain
from gptasym.geometry import ShapeSpec, discretize

_ACCEPTANCE: dict[int, tuple[bool, str]] = {}


class AcceptanceRecorder:
    def __init__(self, number: int):
        self.number = number

    def record(self, ok: bool, detail: str) -> None:
        _ACCEPTANCE[self.number] = (bool(ok), detail)


@pytest.fixture
def acceptance(request):
    marker = request.node.get_closest_marker("criterion")
    return AcceptanceRecorder(marker.args[0])


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is not None and call.when == "call" and call.excinfo is not None:
        n = marker.args[0]
        detail = _ACCEPTANCE.get(n, (False, ""))[1] or str(call.excinfo.value).splitlines()[0]
        _ACCEPTANCE[n] = (False, detail)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        ok, detail = _ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture(scope="session")
def unit_disk():
    return DiskDomain(1.0, 256)


@pytest.fixture(scope="session")
def kite_curve():
    return discretize(ShapeSpec("kite"), 256)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
