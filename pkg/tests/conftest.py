import pytest

from helpers import fixture_assessment
from profquad import bench

_ACCEPTANCE = {}


def record(criterion, ok, detail):
    """Remember one acceptance line for the end-of-session summary."""
    _ACCEPTANCE[criterion] = f"criterion {criterion}: {'PASS' if ok else 'FAIL'}  {detail}"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_ACCEPTANCE):
        terminalreporter.write_line(_ACCEPTANCE[k])


@pytest.fixture(scope="session")
def oscillatory_fixtures():
    return {(fam, n): fixture_assessment(fam, n)
            for fam in bench.OSCILLATORY for n in (1612, 3646)}
