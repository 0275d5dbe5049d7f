from functools import lru_cache

import pytest

from polarfly.ergraph import build_er


@lru_cache(maxsize=None)
def er(q):
    return build_er(q)


@pytest.fixture(scope="session")
def er_graph():
    return er


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(RESULTS, key=lambda k: (int(k.rstrip("abcde")), k)):
        status, detail = RESULTS[key]
        terminalreporter.write_line(f"criterion {key:<4} {status:<9} {detail}")
