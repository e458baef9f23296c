import pathlib

import pytest

from hou_focus.term_core import E, T, Signature, arrows, parse_term

ROOT = pathlib.Path(__file__).resolve().parent.parent
SCENARIOS = sorted((ROOT / "scenarios").glob("*.hou"))


@pytest.fixture
def sig():
    s = Signature.with_consts(l=arrows(E, E, T), j=E, m=E, p=E, s=E,
                              read=arrows(E, E, T), letters=arrows(E, E, E))
    s.declare_meta("Gd")
    return s


@pytest.fixture
def P(sig):
    return lambda text: parse_term(text, sig)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda l: int(l.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
