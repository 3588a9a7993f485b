import sys

import pytest

import corpus


@pytest.fixture(params=corpus.NAMES)
def any_graph(request):
    return corpus.graph(request.param)


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    lines = getattr(acceptance, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines.values():
            terminalreporter.write_line(line)
