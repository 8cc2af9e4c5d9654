import random

import pytest

from varcalc.exprio import parse
from varcalc.jetalg import Bundle

B11 = Bundle(1, 1)
B21 = Bundle(2, 1)
B12 = Bundle(1, 2)
B22 = Bundle(2, 2)
BUNDLES = [B11, B21, B12, B22]


def P(text, bundle=B11):
    """Parse a form; shorthand used throughout the tests."""
    return parse(text, bundle)


def f(text, bundle=B11):
    """Parse a function and return its DiffPoly coefficient."""
    from varcalc.exprio import parse_poly

    return parse_poly(text, bundle)


@pytest.fixture
def rng():
    return random.Random(20261016)


_SECTIONS = {"acceptance criteria": [], "observations": []}


def record_acceptance(line):
    _SECTIONS["acceptance criteria"].append(line)


def record_observation(line):
    """Facts worth reporting that are deliberately not asserted."""
    _SECTIONS["observations"].append(line)


def pytest_terminal_summary(terminalreporter):
    for title, lines in _SECTIONS.items():
        if lines:
            terminalreporter.section(title)
            for line in lines:
                terminalreporter.write_line(line)
