import numpy as np
import pytest
from hypothesis import settings

from rsasd.rscode import rs_code

settings.register_profile("default", deadline=None, max_examples=200)
settings.load_profile("default")

_ACCEPTANCE: list[tuple[int, bool, str]] = []


@pytest.fixture(scope="session")
def rs73():
    return rs_code(7, 3, 3)


@pytest.fixture(scope="session")
def rs1511():
    return rs_code(15, 11, 4)


@pytest.fixture(scope="session")
def rs3125():
    return rs_code(31, 25, 5)


@pytest.fixture(scope="session")
def rs255():
    return rs_code(255, 239, 8)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def criterion():
    """Record one pass/fail line per acceptance criterion."""

    def record(number: int, passed: bool, detail: str = ""):
        _ACCEPTANCE.append((number, passed, detail))
        print(f"CRITERION {number}: {'PASS' if passed else 'FAIL'} {detail}")

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, passed, detail in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}")
