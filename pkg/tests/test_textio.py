from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import DATA, structures
from eqnoether import (
    Atom,
    Const,
    Equality,
    ModelError,
    ParseError,
    Structure,
    Var,
    format_structure,
    format_system,
    parse_structure,
    parse_system,
)
from eqnoether.textio import parse_structure_doc, parse_system_doc, tokenize

STRUCTURES = sorted(DATA.glob("*.str"))
SYSTEMS = sorted(DATA.glob("*.sys"))


def test_gamma_file(gamma):
    assert gamma.universe == ("v1", "v2", "v3", "v4", "v5")
    assert gamma.relation("E") == {
        ("v1", "v1", "v2"),
        ("v1", "v3", "v3"),
        ("v2", "v4", "v1"),
        ("v3", "v2", "v2"),
        ("v5", "v4", "v5"),
    }


@pytest.mark.parametrize("path", STRUCTURES, ids=lambda p: p.name)
def test_structure_files_round_trip(path):
    text = path.read_text()
    s = parse_structure(text)
    assert format_structure(s) == text
    assert parse_structure(format_structure(s)) == s


@pytest.mark.parametrize("path", SYSTEMS, ids=lambda p: p.name)
def test_system_files_round_trip(path):
    gamma = parse_structure((DATA / "gamma.str").read_text())
    text = path.read_text()
    system = parse_system(text, gamma)
    assert format_system(system) == text
    assert parse_system(format_system(system), gamma) == system


def test_comments_and_layout():
    text = """# leading comment
structure s   # trailing
elements a b
elements 3 -4
predicate R 2
(a, b) (3, -4)

(b,a)
predicate U 1
end
"""
    doc = parse_structure_doc(text)
    s = doc.structure
    assert s.universe == ("a", "b", 3, -4)
    assert s.relation("R") == {("a", "b"), (3, -4), ("b", "a")}
    assert s.relation("U") == frozenset()
    assert doc.positions[("element", -4)] == (4, 12)
    assert doc.positions[("tuple", "R", ("b", "a"))] == (8, 1)


def test_one_atom_system():
    system = parse_system("system s\nvars x y\nE(x, v4, y)\nend\n")
    assert system.variables == ("x", "y")
    (eq,) = system.equations
    assert isinstance(eq, Atom) and eq.args == (Var("x"), Const("v4"), Var("y"))


def test_trivial_equality():
    system = parse_system("system s\nvars x\nx = x\nend\n")
    assert system.equations == (Equality(Var("x"), Var("x")),)


def test_system_positions():
    doc = parse_system_doc("system s\nvars x\n\n  x = x\nend\n")
    assert doc.positions[("equation", 0)] == (4, 3)


def err(text, parser=parse_structure, **kw):
    with pytest.raises(ParseError) as info:
        parser(text, **kw)
    return info.value


def test_wrong_tuple_length_names_line():
    e = err("structure s\nelements a b\npredicate R 2\n(a, b)\n(a)\nend\n")
    assert (e.line, e.column) == (5, 1) and "arity 2" in str(e)
    assert str(e).startswith("line 5, column 1:")


def test_structure_errors():
    assert err("structure s\nelements a a\nend\n").column == 12
    assert err("structure s\nelements a\npredicate R 1\n(b)\nend\n").line == 4
    assert err("structure s\nelements a\npredicate R 1\n(a\nend\n").line == 4
    assert err("structure s\nelements a\n").message == "missing 'end'"
    assert err("").line == 1
    assert err("structure s\nelements a ?\nend\n").column == 12
    assert err("structure s\nelements a\n(a)\nend\n").line == 3
    assert err("structure s\nelements a\nend\nelements b\n").line == 4
    assert err("structure s\nelements a\npredicate R 0\nend\n").column == 13
    assert err("structure s\nelements a\npredicate R 1\npredicate R 1\nend\n").line == 4
    assert err("structure s\nend\n").message == "structure has no elements"
    assert err("wrong s\nend\n").line == 1


def test_system_errors(gamma):
    e = err("system s\nvars x\nE(x, z, x)\nend\n", parse_system, structure=gamma)
    assert (e.line, e.column) == (3, 6) and "undeclared" in e.message
    assert err("system s\nE(x)\nend\n", parse_system).line == 2
    assert err("system s\nvars x\nF(x)\nend\n", parse_system, structure=gamma).message == "unknown predicate 'F'"
    assert err("system s\nvars x\nE(x, x)\nend\n", parse_system, structure=gamma).line == 3
    assert err("system s\nvars x\nE(x) E(x)\nend\n", parse_system).line == 3
    assert err("system s\nvars x x\nend\n", parse_system).column == 8
    assert err("system s\nvars x\nx y\nend\n", parse_system).line == 3
    assert err("system s\nvars x\nx = x\n", parse_system).message == "missing 'end'"


def test_variables_shadow_elements():
    s = Structure.build("s", ["x", "y"], {"R": (1, [("x",)])})
    system = parse_system("system s\nvars x\nR(x)\nR(y)\nend\n", s)
    assert system.equations[0].args == (Var("x"),)
    assert system.equations[1].args == (Const("y"),)


def test_unprintable_names():
    with pytest.raises(ModelError):
        format_structure(Structure.build("has space", ["a"], {}))
    with pytest.raises(ModelError):
        format_structure(Structure.build("s", [(1, 2)], {}))


def test_tokenizer_integer_vs_identifier():
    (line,) = tokenize("-3 a-3 b_2")
    assert [(t.kind, t.text) for t in line] == [("int", "-3"), ("ident", "a-3"), ("ident", "b_2")]
    with pytest.raises(ParseError) as info:
        tokenize("a 3a")
    assert info.value.column == 3


@settings(max_examples=100, deadline=None)
@given(structures(max_size=5, max_arity=3), st.booleans())
def test_round_trip_property(s, use_ints):
    if use_ints:
        mapping = {e: i - 2 for i, e in enumerate(s.universe)}
        s = Structure.build(
            "ints", list(mapping.values()), {"P": (s.symbols[0].arity, [tuple(mapping[e] for e in t) for t in s.relation("P")])}
        )
    text = format_structure(s)
    assert parse_structure(text) == s
    assert format_structure(parse_structure(text)) == text
