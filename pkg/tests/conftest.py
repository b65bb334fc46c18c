import sys
from pathlib import Path

import pytest

from welldoc.words import parse_morphism

sys.path.insert(0, str(Path(__file__).parent))

FIXTURES = {
    "fibonacci": "2;0->01;1->0",
    "tribonacci": "3;0->01;1->02;2->0",
    "counterexample": "3;0->02;1->101;2->102",
    "thue_morse": "2;0->01;1->10",
    "all_letters": "3;0->010212;1->0102112;2->010221",
}

# raw images for the string-based oracles
IMAGES = {
    "fibonacci": ["01", "0"],
    "tribonacci": ["01", "02", "0"],
    "counterexample": ["02", "101", "102"],
    "thue_morse": ["01", "10"],
    "all_letters": ["010212", "0102112", "010221"],
}


@pytest.fixture(scope="session")
def morphisms():
    return {name: parse_morphism(text) for name, text in FIXTURES.items()}


_acceptance = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "acceptance" in report.keywords:
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome, report.duration))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome, duration in _acceptance:
        mark = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{mark}  {name}  ({duration:.2f}s)")
