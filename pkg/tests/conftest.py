import time
from contextlib import contextmanager

import pytest

from heckegrid.basis import default_tables

_lines = pytest.StashKey[list]()


@pytest.fixture(scope="session")
def tables():
    return default_tables()


@pytest.fixture
def criterion(request):
    """Context manager that records one PASS/FAIL line for an acceptance criterion."""
    lines = request.config.stash.setdefault(_lines, [])

    @contextmanager
    def run(number: int, title: str):
        t0 = time.perf_counter()
        try:
            yield
        except BaseException as exc:
            dt = time.perf_counter() - t0
            lines.append((number, f"criterion {number:2d}: FAIL ({dt:.2f} s) {title}: {type(exc).__name__}: "
                                  f"{str(exc).splitlines()[0] if str(exc) else ''}"))
            raise
        dt = time.perf_counter() - t0
        lines.append((number, f"criterion {number:2d}: PASS ({dt:.2f} s) {title}"))

    return run


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_lines, [])
    if lines:
        terminalreporter.write_sep("=", "acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
