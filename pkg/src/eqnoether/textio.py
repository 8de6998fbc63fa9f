"""Line-based text formats for structures and equation systems.

Structure files::

    # comments run to end of line
    structure gamma
    elements v1 v2 v3 v4 v5
    predicate E 3
    (v1, v1, v2) (v1, v3, v3)
    (v2, v4, v1)
    end

System files::

    system s
    vars x y
    E(x, v4, y)
    x = v2
    end

Identifiers match ``[A-Za-z_][A-Za-z0-9_-]*``; integer literals are allowed
as elements and parse to ``int``.  In a system, an identifier is a variable
iff it is listed on the ``vars`` line; anything else is a constant.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator

from .model import (
    Atom,
    Const,
    Element,
    Equality,
    EquationSystem,
    ModelError,
    PredicateSymbol,
    Structure,
    Var,
)

IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_-]*\Z")
_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<comment>#.*)|(?P<int>-?\d+)(?![A-Za-z_])|(?P<ident>[A-Za-z_][A-Za-z0-9_-]*)|(?P<punct>[(),=])"
)


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[list[Token]]:
    """Tokens grouped by source line; blank and comment-only lines are dropped."""
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        pos, toks = 0, []
        while pos < len(raw):
            m = _TOKEN_RE.match(raw, pos)
            if m is None:
                raise ParseError(f"unexpected character {raw[pos]!r}", lineno, pos + 1)
            kind = m.lastgroup
            if kind not in ("ws", "comment"):
                toks.append(Token(kind, m.group(), lineno, pos + 1))
            pos = m.end()
        if toks:
            lines.append(toks)
    return lines


def _element(tok: Token) -> Element:
    if tok.kind == "int":
        return int(tok.text)
    if tok.kind == "ident":
        return tok.text
    raise ParseError(f"expected an element name, got {tok.text!r}", tok.line, tok.column)


def _expect(line: list[Token], i: int, text: str) -> None:
    if i >= len(line):
        last = line[-1]
        raise ParseError(f"expected {text!r} at end of line", last.line, last.column + len(last.text))
    if line[i].text != text or line[i].kind != "punct":
        raise ParseError(f"expected {text!r}, got {line[i].text!r}", line[i].line, line[i].column)


def _header(lines: list[list[Token]], keyword: str) -> tuple[str, Token]:
    if not lines:
        raise ParseError(f"empty input; expected '{keyword} NAME'", 1, 1)
    first = lines[0]
    if first[0].text != keyword or len(first) != 2 or first[1].kind != "ident":
        raise ParseError(f"expected '{keyword} NAME'", first[0].line, first[0].column)
    return first[1].text, first[1]


def _split_tuples(line: list[Token]) -> Iterator[tuple[Token, list[Token]]]:
    """Yield ``(open paren, element tokens)`` for each parenthesized tuple on a line."""
    i = 0
    while i < len(line):
        _expect(line, i, "(")
        opener, i, items = line[i], i + 1, []
        while True:
            if i >= len(line):
                raise ParseError("unterminated tuple", opener.line, opener.column)
            tok = line[i]
            if tok.kind in ("int", "ident"):
                items.append(tok)
                i += 1
                if i < len(line) and line[i].text == ",":
                    i += 1
                    continue
                _expect(line, i, ")")
                i += 1
                break
            if tok.text == ")" and not items:
                i += 1
                break
            raise ParseError(f"unexpected {tok.text!r} in tuple", tok.line, tok.column)
        yield opener, items


@dataclass(frozen=True)
class StructureDoc:
    """A parsed structure with the source position of each declared item."""

    structure: Structure
    positions: dict = field(default_factory=dict, compare=False, repr=False)


@dataclass(frozen=True)
class SystemDoc:
    system: EquationSystem
    positions: dict = field(default_factory=dict, compare=False, repr=False)


def parse_structure_doc(text: str) -> StructureDoc:
    lines = tokenize(text)
    name, name_tok = _header(lines, "structure")
    positions: dict = {("structure", name): (name_tok.line, name_tok.column)}
    universe: list = []
    seen: set = set()
    preds: dict[str, tuple[int, list]] = {}
    current: str | None = None
    ended = False
    for line in lines[1:]:
        head = line[0]
        if ended:
            raise ParseError("content after 'end'", head.line, head.column)
        if head.kind == "ident" and head.text == "end":
            if len(line) > 1:
                raise ParseError("unexpected tokens after 'end'", line[1].line, line[1].column)
            ended = True
        elif head.kind == "ident" and head.text == "elements":
            if preds:
                raise ParseError("elements must be declared before predicates", head.line, head.column)
            for tok in line[1:]:
                e = _element(tok)
                if e in seen:
                    raise ParseError(f"duplicate element {tok.text!r}", tok.line, tok.column)
                seen.add(e)
                universe.append(e)
                positions[("element", e)] = (tok.line, tok.column)
        elif head.kind == "ident" and head.text == "predicate":
            if len(line) != 3 or line[1].kind != "ident" or line[2].kind != "int":
                raise ParseError("expected 'predicate NAME ARITY'", head.line, head.column)
            pname, arity = line[1].text, int(line[2].text)
            if arity < 1:
                raise ParseError(f"arity must be positive, got {arity}", line[2].line, line[2].column)
            if pname in preds:
                raise ParseError(f"duplicate predicate {pname!r}", line[1].line, line[1].column)
            preds[pname] = (arity, [])
            positions[("predicate", pname)] = (line[1].line, line[1].column)
            current = pname
        elif head.text == "(":
            if current is None:
                raise ParseError("tuple before any 'predicate' line", head.line, head.column)
            arity, tuples = preds[current]
            for opener, items in _split_tuples(line):
                if len(items) != arity:
                    raise ParseError(
                        f"tuple has {len(items)} entries but {current} has arity {arity}", opener.line, opener.column
                    )
                tup = []
                for tok in items:
                    e = _element(tok)
                    if e not in seen:
                        raise ParseError(f"unknown element {tok.text!r}", tok.line, tok.column)
                    tup.append(e)
                tuples.append(tuple(tup))
                positions.setdefault(("tuple", current, tuple(tup)), (opener.line, opener.column))
        else:
            raise ParseError(f"unexpected {head.text!r}", head.line, head.column)
    if not ended:
        last = lines[-1][-1]
        raise ParseError("missing 'end'", last.line, last.column)
    if not universe:
        raise ParseError("structure has no elements", name_tok.line, name_tok.column)
    structure = Structure(name, tuple(universe), {PredicateSymbol(p, a): ts for p, (a, ts) in preds.items()})
    return StructureDoc(structure, positions)


def parse_structure(text: str) -> Structure:
    return parse_structure_doc(text).structure


def _term(tok: Token, declared: set, structure: Structure | None):
    if tok.kind == "ident" and tok.text in declared:
        return Var(tok.text)
    if tok.kind not in ("ident", "int"):
        raise ParseError(f"expected a variable or constant, got {tok.text!r}", tok.line, tok.column)
    value = _element(tok)
    if structure is not None and value not in structure:
        what = "undeclared variable or unknown element" if tok.kind == "ident" else "unknown element"
        raise ParseError(f"{what} {tok.text!r}", tok.line, tok.column)
    return Const(value)


def parse_system_doc(text: str, structure: Structure | None = None) -> SystemDoc:
    """Parse a system; with ``structure`` given, symbols and constants are checked against it."""
    lines = tokenize(text)
    name, name_tok = _header(lines, "system")
    positions: dict = {("system", name): (name_tok.line, name_tok.column)}
    variables: list[str] | None = None
    arities: dict[str, int] = {}
    equations: list = []
    ended = False
    for line in lines[1:]:
        head = line[0]
        if ended:
            raise ParseError("content after 'end'", head.line, head.column)
        if head.kind == "ident" and head.text == "end" and len(line) == 1:
            ended = True
            continue
        if head.kind == "ident" and head.text == "vars" and (len(line) == 1 or line[1].text not in "(="):
            if variables is not None:
                raise ParseError("duplicate 'vars' line", head.line, head.column)
            variables = []
            for tok in line[1:]:
                if tok.kind != "ident":
                    raise ParseError(f"variable names must be identifiers, got {tok.text!r}", tok.line, tok.column)
                if tok.text in variables:
                    raise ParseError(f"duplicate variable {tok.text!r}", tok.line, tok.column)
                variables.append(tok.text)
                positions[("var", tok.text)] = (tok.line, tok.column)
            continue
        if variables is None:
            raise ParseError("equations must follow a 'vars' line", head.line, head.column)
        declared = set(variables)
        if len(line) >= 2 and line[1].text == "(" and line[1].kind == "punct":
            if head.kind != "ident":
                raise ParseError(f"expected a predicate name, got {head.text!r}", head.line, head.column)
            tuples = list(_split_tuples(line[1:]))
            if len(tuples) != 1:
                extra = tuples[1][0]
                raise ParseError("one equation per line", extra.line, extra.column)
            _, items = tuples[0]
            args = tuple(_term(tok, declared, structure) for tok in items)
            if structure is not None:
                try:
                    sym = structure.symbol(head.text)
                except ModelError:
                    raise ParseError(f"unknown predicate {head.text!r}", head.line, head.column) from None
            else:
                sym = PredicateSymbol(head.text, arities.setdefault(head.text, len(args)) or len(args))
            if len(args) != sym.arity:
                raise ParseError(f"{sym.name} takes {sym.arity} arguments, got {len(args)}", head.line, head.column)
            equations.append(Atom(sym, args))
        elif len(line) == 3 and line[1].text == "=":
            equations.append(Equality(_term(line[0], declared, structure), _term(line[2], declared, structure)))
        else:
            raise ParseError("expected 'P(t1, ..., tn)' or 't1 = t2'", head.line, head.column)
        positions[("equation", len(equations) - 1)] = (head.line, head.column)
    if not ended:
        last = lines[-1][-1]
        raise ParseError("missing 'end'", last.line, last.column)
    if variables is None:
        raise ParseError("missing 'vars' line", name_tok.line, name_tok.column)
    return SystemDoc(EquationSystem(tuple(variables), tuple(equations), name), positions)


def parse_system(text: str, structure: Structure | None = None) -> EquationSystem:
    return parse_system_doc(text, structure).system


def _check_name(name: str, what: str) -> str:
    if not IDENT_RE.match(name):
        raise ModelError(f"{what} {name!r} cannot be written in the text format")
    return name


def _elem_text(e: Element) -> str:
    if isinstance(e, bool) or not isinstance(e, (int, str)):
        raise ModelError(f"element {e!r} cannot be written in the text format")
    return str(e) if isinstance(e, int) else _check_name(e, "element")


def format_structure(structure: Structure) -> str:
    out = [f"structure {_check_name(structure.name, 'structure name')}"]
    out.append("elements " + " ".join(_elem_text(e) for e in structure.universe))
    for sym in structure.symbols:
        out.append(f"predicate {_check_name(sym.name, 'predicate')} {sym.arity}")
        for tup in structure.sorted_relation(sym.name):
            out.append("(" + ", ".join(_elem_text(e) for e in tup) + ")")
    out.append("end")
    return "\n".join(out) + "\n"


def _term_text(t) -> str:
    return t.name if isinstance(t, Var) else _elem_text(t.value)


def format_system(system: EquationSystem) -> str:
    out = [f"system {_check_name(system.name, 'system name')}"]
    out.append(" ".join(["vars", *system.variables]))
    for eq in system.equations:
        if isinstance(eq, Atom):
            out.append(f"{eq.symbol.name}(" + ", ".join(_term_text(t) for t in eq.args) + ")")
        else:
            out.append(f"{_term_text(eq.lhs)} = {_term_text(eq.rhs)}")
    out.append("end")
    return "\n".join(out) + "\n"
