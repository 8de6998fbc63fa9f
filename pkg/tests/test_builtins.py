from __future__ import annotations

import math

import pytest

from eqnoether import ModelError, base_graph, builtin, builtin_stream, clique_graph, int_structure
from eqnoether.builtins import integers


def test_base_graph_three():
    g = builtin("base-graph", 3)
    assert g.universe == ("a1", "a2", "a3", "b1", "b2", "b3")
    undirected = {frozenset(e) for e in g.relation("E")}
    assert undirected == {frozenset(p) for p in [("a2", "b1"), ("a3", "b1"), ("a3", "b2")]}
    assert all((y, x) in g.relation("E") for x, y in g.relation("E"))


def test_clique_graph_one():
    k = clique_graph(1)
    assert k.universe == ("v1",) and k.relation("E") == frozenset()
    assert len(clique_graph(5).relation("E")) == 20


def test_int_strict_pair_count():
    z = int_structure(4)
    assert z.universe == tuple(range(-4, 5))
    assert len(z.relation("LT")) == math.comb(9, 2) == 36
    assert len(builtin("int-nonstrict", 4).relation("LE")) == 36 + 9


def test_base_graph_edge_count():
    for n in range(1, 7):
        assert len(base_graph(n).relation("E")) == 2 * math.comb(n, 2)


def test_unknown_and_bad_sizes():
    with pytest.raises(ModelError):
        builtin("petersen", 3)
    with pytest.raises(ModelError):
        builtin("base-graph", 0)
    with pytest.raises(ModelError):
        builtin_stream("base-graph", 10)


def test_integer_enumeration():
    it = integers()
    assert [next(it) for _ in range(7)] == [0, 1, -1, 2, -2, 3, -3]
