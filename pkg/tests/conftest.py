import sys
import zlib
from pathlib import Path

import numpy as np
import pytest

from schattenkit import _backend

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture(params=_backend.available())
def backend(request):
    """Run the test once per importable kernel backend."""
    previous = _backend.NAME
    _backend.set_backend(request.param)
    yield request.param
    _backend.set_backend(previous)


@pytest.fixture
def rng(request):
    seed = zlib.crc32(request.node.name.encode())
    return np.random.default_rng(seed)


ACCEPTANCE = []


@pytest.fixture
def criterion(request):
    """Record a named acceptance criterion; the summary prints one line per criterion."""

    def record(number, title, passed, detail):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number:>2}: {title} ({detail})"
        ACCEPTANCE.append((number, line))
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(ACCEPTANCE):
        terminalreporter.write_line(line)
