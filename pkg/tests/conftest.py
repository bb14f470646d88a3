import zlib
from pathlib import Path

import numpy as np
import pytest

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

_criteria = {}
_details = {}


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def record(request):
    """Attach a one-line summary to an acceptance criterion."""

    def _record(text):
        _details[request.node.name] = text
        print(text)

    return _record


@pytest.fixture
def rng(request):
    """Generator seeded from the test name, so each test is reproducible on its own."""
    return np.random.default_rng(zlib.crc32(request.node.name.encode()))


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if name.startswith("test_criterion_"):
        _criteria[name] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_criteria, key=lambda s: int(s.split("_")[2])):
        detail = _details.get(name, "")
        terminalreporter.write_line(f"{_criteria[name]}  {name}  {detail}".rstrip())
