"""Brute-force reference implementations used only by the tests.

They read relations as plain sets of tuples and enumerate everything, so
they share no search or pruning logic with the library.
"""

from __future__ import annotations

import itertools


def _value(term, point):
    kind, x = term
    return point[x] if kind == "var" else x


def _holds(rels, eq, point):
    if eq[0] == "=":
        return _value(eq[1], point) == _value(eq[2], point)
    return tuple(_value(t, point) for t in eq[1]) in rels[eq[0]]


def plain_equation(eq):
    """Library equation -> ("=", lhs, rhs) or (symbol, args) with ("var"|"const", x) terms."""
    from eqnoether import Atom, Var

    def term(t):
        return ("var", t.name) if isinstance(t, Var) else ("const", t.value)

    if isinstance(eq, Atom):
        return (eq.symbol.name, tuple(term(t) for t in eq.args))
    return ("=", term(eq.lhs), term(eq.rhs))


def solutions(universe, rels, variables, equations):
    out = set()
    for values in itertools.product(universe, repeat=len(variables)):
        point = dict(zip(variables, values))
        if all(_holds(rels, eq, point) for eq in equations):
            out.add(values)
    return out


def minimum_equivalent_size(universe, rels, variables, equations):
    target = solutions(universe, rels, variables, equations)
    for size in range(len(equations) + 1):
        for combo in itertools.combinations(equations, size):
            if solutions(universe, rels, variables, combo) == target:
                return size
    raise AssertionError


def staircase_exists(universe, rel, p, t, d):
    width = p + t
    for perm in itertools.permutations(universe, width * d):
        rows = [(perm[i * width : i * width + p], perm[i * width + p : (i + 1) * width]) for i in range(d)]
        if all(
            a + b not in rel and all(a + rows[j][1] in rel for j in range(i)) for i, (a, b) in enumerate(rows)
        ):
            return True
    return False


def clique_exists(universe, rel, d):
    for seq in itertools.product(universe, repeat=d):
        if all((x, x) not in rel and all((x, seq[j]) in rel for j in range(i)) for i, x in enumerate(seq)):
            return True
    return False


def refinement_ok(D, idx):
    """Each column constant or injective on the rows; two columns equal or value-disjoint."""
    cols = [[D[r][j] for r in idx] for j in range(len(D[0]))]
    for c in cols:
        if len(set(c)) not in (1, len(c)):
            return False
    for c1, c2 in itertools.combinations(cols, 2):
        if c1 != c2 and set(c1) & set(c2):
            return False
    return True


def max_refinement(D):
    for size in range(len(D), 0, -1):
        if any(refinement_ok(D, idx) for idx in itertools.combinations(range(len(D)), size)):
            return size
    return 0


def cone(carrier, leq, A, up):
    return {x for x in carrier if all((leq(a, x) if up else leq(x, a)) for a in A)}


def first_staircase(universe, rel, p, t, d):
    """First staircase in lexicographic order of the flattened rows (universe order)."""
    width = p + t
    for perm in itertools.permutations(universe, width * d):
        rows = tuple((perm[i * width : i * width + p], perm[i * width + p : (i + 1) * width]) for i in range(d))
        if all(
            a + b not in rel and all(a + rows[j][1] in rel for j in range(i)) for i, (a, b) in enumerate(rows)
        ):
            return rows
    return None


def first_clique(universe, rel, d):
    for seq in itertools.product(universe, repeat=d):
        if all((x, x) not in rel and all((x, seq[j]) in rel for j in range(i)) for i, x in enumerate(seq)):
            return seq
    return None
