from fractions import Fraction

import pytest
from hypothesis import strategies as st

from prodinf import Event, GroundSpace, ProductSpace
from prodinf.families import family_event

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@st.composite
def ground_spaces(draw, max_k=3, allow_zero=True):
    k = draw(st.integers(1, max_k))
    lo = 0 if allow_zero else 1
    raw = draw(st.lists(st.integers(lo, 4), min_size=k, max_size=k).filter(lambda r: sum(r) > 0))
    return GroundSpace([Fraction(r, sum(raw)) for r in raw])


@st.composite
def events(draw, max_k=3, max_n=3, allow_zero=True):
    ground = draw(ground_spaces(max_k, allow_zero))
    n = draw(st.integers(1, max_n))
    space = ProductSpace(ground, n)
    bits = draw(st.lists(st.integers(0, 1), min_size=space.size, max_size=space.size))
    return Event(space, bytes(bits))


@pytest.fixture
def bits():
    return GroundSpace.uniform(2)


def fam(name, n, k=2, **params):
    return family_event(ProductSpace(GroundSpace.uniform(k), n), name, params)
