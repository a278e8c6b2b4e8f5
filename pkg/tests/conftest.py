import contextlib
import random

import pytest

from torus_ec.torus import build_torus

_CRITERIA: dict = {}


@pytest.fixture
def rng():
    return random.Random(12345)


def torus(r, d):
    return build_torus(r, d)


@pytest.fixture
def criterion():
    """with criterion(n, text) as note: ... records PASS/FAIL for the summary."""
    @contextlib.contextmanager
    def rec(n, text):
        notes: list = []
        try:
            yield notes.append
        except BaseException as exc:
            _CRITERIA[n] = f"criterion {n}: FAIL  {text}  ({type(exc).__name__}: {exc})"
            raise
        extra = f"  [{'; '.join(notes)}]" if notes else ""
        _CRITERIA[n] = f"criterion {n}: PASS  {text}{extra}"
    return rec


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for n in sorted(_CRITERIA):
            terminalreporter.write_line(_CRITERIA[n])
