import functools

import numpy as np
import pytest

from n33.surfacegen import construct_family

_CRITERIA: dict = {}


@functools.lru_cache(maxsize=None)
def family_model(name: str, seed: int = 0):
    """Constructed surfaces are shared across test modules."""
    return construct_family(name, seed=seed)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def criterion():
    """Record a pass/fail line for an acceptance criterion; the line is printed
    immediately and again in the terminal summary."""

    def record(number: int, title: str, ok: bool, detail: str = ""):
        line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {title}" + (f"  [{detail}]" if detail else "")
        _CRITERIA[number] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_CRITERIA):
        terminalreporter.write_line(_CRITERIA[k])
