import functools
from pathlib import Path

import pytest

from icsskit.fixtures import corpus
from icsskit.intlin import available_backends, set_backend

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "fixtures"


@functools.lru_cache(maxsize=None)
def shipped():
    return corpus()


@pytest.fixture(scope="session")
def models():
    return shipped()


@pytest.fixture(params=available_backends())
def backend(request):
    prev = set_backend(request.param)
    yield request.param
    set_backend(prev)


_LINES = []


@pytest.fixture
def criterion():
    """Recorder for acceptance lines: ``criterion(number, label, ok, detail)``."""

    def record(number, label, ok, detail=""):
        line = f"criterion {number} {'PASS' if ok else 'FAIL'}: {label}" + (f" ({detail})" if detail else "")
        _LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
