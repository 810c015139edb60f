from __future__ import annotations

from fractions import Fraction

from hypothesis import strategies as st

from divpos.numbers import FieldElem

ACCEPTANCE_LINES: list[str] = []


def rationals(max_num: int = 50, max_den: int = 12):
    return st.builds(Fraction, st.integers(-max_num, max_num), st.integers(1, max_den))


def field_elems(d: int = 2, **kw):
    return st.builds(lambda a, b: FieldElem(a, b, d), rationals(**kw), rationals(**kw))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
