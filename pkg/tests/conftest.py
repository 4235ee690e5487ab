import json
from pathlib import Path

import mpmath as mp
import pytest

from swiptevt import _backend, evt, exact, special

GOLDEN = json.loads((Path(__file__).parent / "golden" / "golden.json").read_text())
BACKENDS = ["python"] + (["cython"] if _backend.BACKEND == "cython" else [])


@pytest.fixture(scope="session")
def golden():
    return GOLDEN


@pytest.fixture(params=BACKENDS)
def backend(request, monkeypatch):
    """Run a test once per kernel implementation."""
    k = _backend.get_kernels(request.param)
    for mod in (evt, exact, special):
        monkeypatch.setattr(mod, "kernels", k)
    return request.param


def mpf(text):
    return float(mp.mpf(text))


ACCEPTANCE = []


@pytest.fixture
def verdict():
    """Record and print one acceptance line, then assert it."""
    def record(label, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} criterion {label}: {detail}"
        ACCEPTANCE.append(line)
        print(line)
        assert ok, line
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
