import os

import pytest


def pytest_addoption(parser):
    parser.addoption("--full", action="store_true", default=False,
                     help="also run the full-scale (50/15 instances) acceptance experiment")


def pytest_configure(config):
    config.addinivalue_line("markers", "full: full-scale experiment, needs --full or MLSA_FULL=1")
    config._acceptance_lines = []


def pytest_collection_modifyitems(config, items):
    if config.getoption("--full") or os.environ.get("MLSA_FULL") == "1":
        return
    skip = pytest.mark.skip(reason="full-scale run; pass --full or set MLSA_FULL=1")
    for item in items:
        if "full" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def acceptance(request):
    """Record one summary line per acceptance criterion."""
    lines = request.config._acceptance_lines

    def record(number, passed, detail):
        line = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}"
        lines.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split(":")[0].split()[1])):
            terminalreporter.write_line(line)
