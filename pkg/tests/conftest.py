from __future__ import annotations

import itertools
from pathlib import Path

import pytest
from hypothesis import strategies as st

from eqnoether import Structure, parse_structure

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "data"
GOLDEN = Path(__file__).resolve().parent / "golden"

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def gamma() -> Structure:
    return parse_structure((DATA / "gamma.str").read_text())


@st.composite
def binary_structures(draw, max_size=8, symbol="E"):
    n = draw(st.integers(1, max_size))
    universe = [f"e{i}" for i in range(n)]
    pairs = [(x, y) for x in universe for y in universe]
    rel = [pr for pr, keep in zip(pairs, draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))) if keep]
    return Structure.build("rand", universe, {symbol: (2, rel)})


@st.composite
def structures(draw, max_size=4, max_arity=3):
    n = draw(st.integers(1, max_size))
    universe = [f"e{i}" for i in range(n)]
    arity = draw(st.integers(1, max_arity))
    tuples = list(itertools.product(universe, repeat=arity))
    rel = draw(st.lists(st.sampled_from(tuples), max_size=min(len(tuples), 20)))
    return Structure.build("rand", universe, {"P": (arity, rel)})


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
