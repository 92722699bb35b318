import re

import pytest


def pytest_configure(config):
    config.acceptance_lines = []


@pytest.fixture
def acceptance_log(request):
    return request.config.acceptance_lines


def pytest_terminal_summary(terminalreporter):
    lines = terminalreporter.config.acceptance_lines
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: [int(t) if t.isdigit() else t
                                                 for t in re.split(r"(\d+)", s.split(":")[0])]):
            terminalreporter.write_line(line)
