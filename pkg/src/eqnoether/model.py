"""Finite predicate structures, atomic equations and their algebraic sets.

Elements of a structure double as constant symbols, so an equation may
mention any element of the universe directly.  Equality is built in and is
interpreted as identity on the universe.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import reduce
from typing import Callable, Hashable, Iterable, Mapping, Sequence, Union

Element = Hashable
Assignment = Mapping[str, Element]

EXACT_MINIMIZE_CAP = 20


class ModelError(ValueError):
    """Ill-formed structure, equation or system, or a bad evaluation request."""


@dataclass(frozen=True)
class PredicateSymbol:
    name: str
    arity: int

    def __post_init__(self) -> None:
        if not isinstance(self.arity, int) or self.arity < 1:
            raise ModelError(f"predicate {self.name!r}: arity must be a positive integer, got {self.arity!r}")

    def __str__(self) -> str:
        return f"{self.name}/{self.arity}"


# Reserved symbol used for configurations of equalities; not a user relation.
EQUALITY = PredicateSymbol("=", 2)


@dataclass(frozen=True)
class Structure:
    """A finite universe together with named finitary relations.

    ``relations`` maps each symbol to a set of tuples; the universe order is
    the declaration order and drives every deterministic enumeration.
    """

    name: str
    universe: tuple
    relations: Mapping[PredicateSymbol, frozenset]
    _index: dict = field(init=False, repr=False, compare=False)
    _by_name: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        universe = tuple(self.universe)
        if not universe:
            raise ModelError(f"structure {self.name!r}: universe must be nonempty")
        index: dict = {}
        for pos, e in enumerate(universe):
            if e in index:
                raise ModelError(f"structure {self.name!r}: duplicate element {e!r}")
            index[e] = pos
        rels: dict = {}
        by_name: dict = {}
        for sym, tuples in self.relations.items():
            if sym.name in by_name or sym.name == EQUALITY.name:
                raise ModelError(f"structure {self.name!r}: duplicate or reserved predicate name {sym.name!r}")
            frozen = frozenset(tuple(t) for t in tuples)
            for t in frozen:
                if len(t) != sym.arity:
                    raise ModelError(f"predicate {sym.name}: tuple {t!r} has length {len(t)}, expected {sym.arity}")
                for e in t:
                    if e not in index:
                        raise ModelError(f"predicate {sym.name}: element {e!r} is not in the universe")
            rels[sym] = frozen
            by_name[sym.name] = sym
        object.__setattr__(self, "universe", universe)
        object.__setattr__(self, "relations", rels)
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_by_name", by_name)

    @classmethod
    def build(cls, name: str, universe: Iterable[Element], relations: Mapping[str, tuple[int, Iterable]]) -> Structure:
        """Convenience constructor taking ``{name: (arity, tuples)}``."""
        return cls(name, tuple(universe), {PredicateSymbol(n, a): ts for n, (a, ts) in relations.items()})

    @property
    def symbols(self) -> tuple[PredicateSymbol, ...]:
        return tuple(self.relations)

    def symbol(self, name: str) -> PredicateSymbol:
        try:
            return self._by_name[name]
        except KeyError:
            raise ModelError(f"structure {self.name!r} has no predicate {name!r}") from None

    def relation(self, name: str) -> frozenset:
        return self.relations[self.symbol(name)]

    def holds(self, name: str, args: Sequence[Element]) -> bool:
        return tuple(args) in self.relation(name)

    def __contains__(self, element: object) -> bool:
        return element in self._index

    def index(self, element: Element) -> int:
        try:
            return self._index[element]
        except KeyError:
            raise ModelError(f"element {element!r} is not in the universe of {self.name!r}") from None

    def sort_key(self, tup: Sequence[Element]) -> tuple[int, ...]:
        return tuple(self._index[e] for e in tup)

    def sorted_relation(self, name: str) -> list[tuple]:
        return sorted(self.relation(name), key=self.sort_key)

    def with_relations(self, extra: Mapping[PredicateSymbol, Iterable], name: str | None = None) -> Structure:
        rels = dict(self.relations)
        for sym, tuples in extra.items():
            if sym.name in self._by_name:
                raise ModelError(f"predicate name {sym.name!r} already used in {self.name!r}")
            rels[sym] = tuples
        return Structure(name or self.name, self.universe, rels)

    def restrict(self, elements: Iterable[Element], name: str | None = None) -> Structure:
        """Induced substructure on ``elements`` (kept in the given order)."""
        keep = tuple(elements)
        kept = set(keep)
        rels = {sym: frozenset(t for t in ts if kept.issuperset(t)) for sym, ts in self.relations.items()}
        return Structure(name or self.name, keep, rels)


# -- terms and equations ---------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Const:
    value: Element

    def __str__(self) -> str:
        return str(self.value)


Term = Union[Var, Const]


@dataclass(frozen=True)
class Atom:
    symbol: PredicateSymbol
    args: tuple

    def __post_init__(self) -> None:
        args = tuple(self.args)
        if len(args) != self.symbol.arity:
            raise ModelError(f"{self.symbol.name} takes {self.symbol.arity} arguments, got {len(args)}")
        for a in args:
            if not isinstance(a, (Var, Const)):
                raise ModelError(f"argument {a!r} is neither a variable nor a constant")
        object.__setattr__(self, "args", args)

    @property
    def terms(self) -> tuple:
        return self.args

    def __str__(self) -> str:
        return f"{self.symbol.name}({', '.join(map(str, self.args))})"


@dataclass(frozen=True)
class Equality:
    lhs: Term
    rhs: Term

    def __post_init__(self) -> None:
        for a in (self.lhs, self.rhs):
            if not isinstance(a, (Var, Const)):
                raise ModelError(f"term {a!r} is neither a variable nor a constant")

    @property
    def terms(self) -> tuple:
        return (self.lhs, self.rhs)

    def __str__(self) -> str:
        return f"{self.lhs} = {self.rhs}"


Equation = Union[Atom, Equality]


def variables_of(eq: Equation) -> set[str]:
    return {t.name for t in eq.terms if isinstance(t, Var)}


def has_constants(eq: Equation) -> bool:
    return any(isinstance(t, Const) for t in eq.terms)


@dataclass(frozen=True)
class EquationSystem:
    variables: tuple
    equations: tuple
    name: str = "S"

    def __post_init__(self) -> None:
        variables = tuple(self.variables)
        equations = tuple(self.equations)
        if len(set(variables)) != len(variables):
            raise ModelError(f"system {self.name!r}: duplicate variable")
        declared = set(variables)
        for i, eq in enumerate(equations):
            missing = variables_of(eq) - declared
            if missing:
                raise ModelError(f"system {self.name!r}, equation {i}: undeclared variable(s) {sorted(missing)}")
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "equations", equations)

    def __len__(self) -> int:
        return len(self.equations)

    def subsystem(self, indices: Iterable[int]) -> EquationSystem:
        return EquationSystem(self.variables, tuple(self.equations[i] for i in indices), self.name)

    def union(self, other: EquationSystem) -> EquationSystem:
        if set(other.variables) != set(self.variables):
            raise ModelError("systems are over different variable sets")
        return EquationSystem(self.variables, self.equations + other.equations, self.name)


@dataclass(frozen=True)
class AlgebraicSet:
    """Solutions of a system; ``points`` are value tuples in variable order."""

    variables: tuple
    points: tuple

    def __len__(self) -> int:
        return len(self.points)

    def __contains__(self, a: object) -> bool:
        if not isinstance(a, Mapping):
            return False
        return tuple(a.get(v) for v in self.variables) in set(self.points)

    def assignments(self) -> list[dict]:
        return [dict(zip(self.variables, p)) for p in self.points]

    def as_set(self) -> frozenset:
        return frozenset(self.points)


# -- evaluation ------------------------------------------------------------


def _check_term(structure: Structure, term: Term) -> None:
    if isinstance(term, Const) and term.value not in structure:
        raise ModelError(f"constant {term.value!r} is not in the universe of {structure.name!r}")


def _check_equation(structure: Structure, eq: Equation) -> None:
    if isinstance(eq, Atom):
        sym = structure.symbol(eq.symbol.name)
        if sym != eq.symbol:
            raise ModelError(f"arity mismatch: {eq.symbol} used, structure declares {sym}")
    elif not isinstance(eq, Equality):
        raise ModelError(f"not an equation: {eq!r}")
    for t in eq.terms:
        _check_term(structure, t)


def _value(term: Term, a: Assignment, structure: Structure) -> Element:
    if isinstance(term, Const):
        return term.value
    try:
        value = a[term.name]
    except KeyError:
        raise ModelError(f"variable {term.name!r} is unassigned") from None
    if value not in structure:
        raise ModelError(f"variable {term.name!r} is assigned {value!r}, which is not in the universe")
    return value


def eval_equation(structure: Structure, eq: Equation, a: Assignment) -> bool:
    _check_equation(structure, eq)
    if isinstance(eq, Equality):
        return _value(eq.lhs, a, structure) == _value(eq.rhs, a, structure)
    return tuple(_value(t, a, structure) for t in eq.args) in structure.relation(eq.symbol.name)


def _compile(structure: Structure, variables: Sequence[str], eq: Equation) -> Callable[[tuple], bool]:
    """Turn ``eq`` into a test on value tuples laid out in ``variables`` order."""
    _check_equation(structure, eq)
    pos = {v: i for i, v in enumerate(variables)}
    getters = []
    for t in eq.terms:
        if isinstance(t, Var):
            if t.name not in pos:
                raise ModelError(f"variable {t.name!r} is unassigned")
            getters.append((True, pos[t.name]))
        else:
            getters.append((False, t.value))

    def values(point: tuple) -> tuple:
        return tuple(point[g] if is_var else g for is_var, g in getters)

    if isinstance(eq, Equality):
        return lambda point: (lambda v: v[0] == v[1])(values(point))
    rel = structure.relation(eq.symbol.name)
    return lambda point: values(point) in rel


def _points(structure: Structure, n: int) -> list[tuple]:
    return list(itertools.product(structure.universe, repeat=n))


def solve_system(structure: Structure, system: EquationSystem) -> AlgebraicSet:
    tests = [_compile(structure, system.variables, eq) for eq in system.equations]
    pts = tuple(p for p in _points(structure, len(system.variables)) if all(t(p) for t in tests))
    return AlgebraicSet(system.variables, pts)


def systems_equivalent(structure: Structure, s1: EquationSystem, s2: EquationSystem) -> bool:
    if tuple(s1.variables) != tuple(s2.variables):
        if set(s1.variables) != set(s2.variables):
            raise ModelError("systems are over different variable sets")
        s2 = EquationSystem(s1.variables, s2.equations, s2.name)
    return solve_system(structure, s1).as_set() == solve_system(structure, s2).as_set()


def _solution_masks(structure: Structure, system: EquationSystem) -> tuple[list[int], int]:
    pts = _points(structure, len(system.variables))
    masks = []
    for eq in system.equations:
        test = _compile(structure, system.variables, eq)
        m = 0
        for bit, p in enumerate(pts):
            if test(p):
                m |= 1 << bit
        masks.append(m)
    return masks, (1 << len(pts)) - 1


def minimize_system(structure: Structure, system: EquationSystem, mode: str = "exact") -> tuple[int, ...]:
    """Indices of an equivalent subsystem.

    ``exact`` returns a minimum-cardinality subsystem (lexicographically least
    among ties, at most ``EXACT_MINIMIZE_CAP`` equations); ``greedy`` drops
    equations in index order while equivalence is preserved, which yields an
    inclusion-minimal subsystem.
    """
    masks, full = _solution_masks(structure, system)
    meet = lambda idx: reduce(lambda acc, i: acc & masks[i], idx, full)  # noqa: E731
    target = meet(range(len(masks)))
    if mode == "exact":
        if len(masks) > EXACT_MINIMIZE_CAP:
            raise ModelError(f"exact minimization is capped at {EXACT_MINIMIZE_CAP} equations; use mode='greedy'")
        for size in range(len(masks) + 1):
            for combo in itertools.combinations(range(len(masks)), size):
                if meet(combo) == target:
                    return combo
        raise AssertionError("unreachable: the full system is equivalent to itself")
    if mode == "greedy":
        keep = list(range(len(masks)))
        for i in range(len(masks)):
            trial = [j for j in keep if j != i]
            if meet(trial) == target:
                keep = trial
        return tuple(keep)
    raise ModelError(f"unknown minimization mode {mode!r}")


# -- shapes and configurations -------------------------------------------


def _equations(system: EquationSystem | Sequence[Equation]) -> tuple:
    return system.equations if isinstance(system, EquationSystem) else tuple(system)


def classify_by_shape(system: EquationSystem | Sequence[Equation]) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
    """Split indices into (no variables, no constants, mixed)."""
    only_c, only_x, mixed = [], [], []
    for i, eq in enumerate(_equations(system)):
        has_v, has_c = bool(variables_of(eq)), has_constants(eq)
        if not has_v:
            only_c.append(i)
        elif not has_c:
            only_x.append(i)
        else:
            mixed.append(i)
    return tuple(only_c), tuple(only_x), tuple(mixed)


class _ConstSlot:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "CONST"

    def __reduce__(self):
        return (_ConstSlot, ())


CONST = _ConstSlot()


@dataclass(frozen=True)
class Configuration:
    symbol: PredicateSymbol
    pattern: tuple

    def __str__(self) -> str:
        slots = ", ".join("_" if s is CONST else s.name for s in self.pattern)
        return f"{self.symbol.name}({slots})"


def configuration_of(eq: Equation) -> Configuration:
    symbol = eq.symbol if isinstance(eq, Atom) else EQUALITY
    return Configuration(symbol, tuple(t if isinstance(t, Var) else CONST for t in eq.terms))


def same_configuration(e1: Equation, e2: Equation) -> bool:
    return configuration_of(e1) == configuration_of(e2)


def group_by_configuration(system: EquationSystem | Sequence[Equation]) -> dict[Configuration, list[int]]:
    groups: dict[Configuration, list[int]] = {}
    for i, eq in enumerate(_equations(system)):
        groups.setdefault(configuration_of(eq), []).append(i)
    return groups


def configuration_bound(arity: int, n_variables: int) -> int:
    """Number of distinct configurations of one symbol over ``n_variables`` variables."""
    return (n_variables + 1) ** arity


def check_kotov_prefix(
    structure: Structure,
    equations: Sequence[Equation],
    points: Sequence[Assignment],
) -> bool:
    """``s_i`` fails at ``a_i`` for every i, and ``s_j`` holds at ``a_i`` for all j < i."""
    if len(equations) != len(points):
        raise ModelError(f"{len(equations)} equations but {len(points)} points")
    for i, (eq, a) in enumerate(zip(equations, points)):
        if eval_equation(structure, eq, a):
            return False
        for j in range(i):
            if not eval_equation(structure, equations[j], a):
                return False
    return True
