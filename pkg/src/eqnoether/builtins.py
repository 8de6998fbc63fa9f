"""Generators for the standard example structures and streams."""

from __future__ import annotations

import itertools
from typing import Iterator, Sequence

from .model import ModelError, PredicateSymbol, Structure
from .posets import StreamedPoset

BUILTINS = ("int-strict", "int-nonstrict", "base-graph", "clique-graph")


def int_structure(n: int, strict: bool = True) -> Structure:
    """``{-n..n}`` with ``LT`` (strict) or ``LE``, in ascending order."""
    elems = range(-n, n + 1)
    if strict:
        return Structure(f"int-strict-{n}", tuple(elems), {PredicateSymbol("LT", 2): [(x, y) for x in elems for y in elems if x < y]})
    return Structure(f"int-nonstrict-{n}", tuple(elems), {PredicateSymbol("LE", 2): [(x, y) for x in elems for y in elems if x <= y]})


def base_graph(n: int) -> Structure:
    """Simple graph on ``a1..an, b1..bn`` with ``a_i -- b_j`` iff ``j < i``."""
    a = [f"a{i}" for i in range(1, n + 1)]
    b = [f"b{i}" for i in range(1, n + 1)]
    edges = []
    for i in range(n):
        for j in range(i):
            edges += [(a[i], b[j]), (b[j], a[i])]
    return Structure(f"base-graph-{n}", tuple(a + b), {PredicateSymbol("E", 2): edges})


def clique_graph(n: int) -> Structure:
    """The complete simple graph ``K_n`` on ``v1..vn``."""
    v = [f"v{i}" for i in range(1, n + 1)]
    return Structure(f"clique-graph-{n}", tuple(v), {PredicateSymbol("E", 2): [(x, y) for x in v for y in v if x != y]})


def builtin(name: str, size: int) -> Structure:
    if size < 1:
        raise ModelError("builtin size must be at least 1")
    if name == "int-strict":
        return int_structure(size, strict=True)
    if name == "int-nonstrict":
        return int_structure(size, strict=False)
    if name == "base-graph":
        return base_graph(size)
    if name == "clique-graph":
        return clique_graph(size)
    raise ModelError(f"unknown builtin {name!r}; expected one of {', '.join(BUILTINS)}")


def integers() -> Iterator[int]:
    """0, 1, -1, 2, -2, ..."""
    yield 0
    for i in itertools.count(1):
        yield i
        yield -i


def int_stream(strict: bool = True, budget: int = 100) -> StreamedPoset:
    if strict:
        return StreamedPoset(integers, lambda x, y: x < y, True, budget, "LT", "int-strict")
    return StreamedPoset(integers, lambda x, y: x <= y, False, budget, "LE", "int-nonstrict")


def builtin_stream(name: str, budget: int) -> StreamedPoset:
    if name == "int-strict":
        return int_stream(True, budget)
    if name == "int-nonstrict":
        return int_stream(False, budget)
    raise ModelError(f"no streamed order named {name!r}; expected int-strict or int-nonstrict")


# Named subset selectors for cone probes; each maps a prefix to a subset in prefix order.
def _odd_negatives(prefix: Sequence) -> list:
    return [x for x in prefix if isinstance(x, int) and x < 0 and x % 2 == 1]


def _negatives(prefix: Sequence) -> list:
    return [x for x in prefix if isinstance(x, int) and x < 0]


SELECTORS = {
    "all": lambda prefix: list(prefix),
    "first": lambda prefix: list(prefix[:1]),
    "negatives": _negatives,
    "odd-negatives": _odd_negatives,
}
