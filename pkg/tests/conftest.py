import contextlib

import pytest

from setpairs import SetPairSystem, complementary_five_cycles, standard_example

_ACCEPTANCE: list[tuple[str, str, str]] = []


@contextlib.contextmanager
def criterion(number, text):
    """Record a PASS/FAIL line for an acceptance criterion."""
    try:
        yield
    except BaseException:
        _ACCEPTANCE.append((str(number), "FAIL", text))
        raise
    _ACCEPTANCE.append((str(number), "PASS", text))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, status, text in sorted(_ACCEPTANCE, key=lambda r: int(r[0].split(".")[0])):
        terminalreporter.write_line(f"[{status}] criterion {number}: {text}")


@pytest.fixture
def five_cycle():
    return complementary_five_cycles()


@pytest.fixture
def single_pair():
    return SetPairSystem.from_lists([({1, 2}, {3})])


@pytest.fixture
def std22():
    return standard_example(2, 2)
