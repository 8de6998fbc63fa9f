"""Base cones of partial orders and their link to staircase/clique witnesses.

Orders come either as a finite :class:`Poset` or as a :class:`StreamedPoset`,
an element enumerator plus a comparison oracle that is explored through
finite prefixes.  Cones follow the order's own relation verbatim, so for a
strict order ``x`` lies in ``A``'s lower cone only if ``x < a`` strictly for
every ``a`` in ``A``.

"Infinitely generated" has no finite test.  The growth probe reports the
size of the incrementally built generating set on growing prefixes, and the
constructions below turn observed growth into witnesses and back.
"""

from __future__ import annotations

import itertools
from functools import cached_property
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence, Union

from .model import Element, ModelError, PredicateSymbol, Structure
from .predicates import DerivedPredicateSpec, derive_structure
from .witness import (
    CliqueWitness,
    StaircaseWitness,
    Witness,
    find_clique,
    find_staircase,
    refine_tuples,
    verify_clique,
    verify_staircase,
)

DIRECTIONS = ("up", "down")
MINIMAL_EXACT_CAP = 15


class OrderAxiomError(ValueError):
    """The relation (or oracle) violates the axioms of its order tag."""


def check_order_axioms(structure: Structure, symbol: str, strict: bool) -> None:
    rel = structure.relation(symbol)
    if structure.symbol(symbol).arity != 2:
        raise OrderAxiomError(f"{symbol} is not binary")
    for x in structure.universe:
        if ((x, x) in rel) == strict:
            kind = "irreflexive" if strict else "reflexive"
            raise OrderAxiomError(f"{symbol} is not {kind} at {x!r}")
    succ: dict = {x: set() for x in structure.universe}
    for x, y in rel:
        succ[x].add(y)
    for x, y in rel:
        if x != y and (y, x) in rel:
            raise OrderAxiomError(f"{symbol} is not antisymmetric: {x!r} and {y!r}")
        if not succ[y] <= succ[x]:
            z = next(iter(succ[y] - succ[x]))
            raise OrderAxiomError(f"{symbol} is not transitive: {x!r}, {y!r}, {z!r}")


def dual_name(symbol: str) -> str:
    return f"{symbol}_op"


@dataclass(frozen=True)
class Poset:
    """A structure with one binary order relation tagged strict or nonstrict.

    ``oriented`` additionally carries the dual relation (arguments swapped)
    under :func:`dual_name`, so that equations ``b < x`` can be searched as
    variables-first staircases.
    """

    structure: Structure
    symbol: str
    strict: bool
    check: bool = field(default=True, compare=False)

    def __post_init__(self) -> None:
        if self.check:
            check_order_axioms(self.structure, self.symbol, self.strict)

    @cached_property
    def oriented(self) -> Structure:
        spec = DerivedPredicateSpec(self.symbol, dual_name(self.symbol), permutation=(2, 1))
        return derive_structure(self.structure, [spec])

    @classmethod
    def from_relation(
        cls, elements: Iterable[Element], rel: Iterable[tuple], strict: bool, symbol: str | None = None, name: str = "P"
    ) -> Poset:
        symbol = symbol or ("LT" if strict else "LE")
        return cls(Structure(name, tuple(elements), {PredicateSymbol(symbol, 2): rel}), symbol, strict)

    @property
    def carrier(self) -> tuple:
        return self.structure.universe

    @property
    def dual(self) -> str:
        return dual_name(self.symbol)

    def holds(self, x: Element, y: Element) -> bool:
        return (x, y) in self.structure.relation(self.symbol)

    def witness_symbol(self, direction: str) -> str:
        """Symbol whose staircases correspond to cones in ``direction``."""
        _check_direction(direction)
        return self.symbol if direction == "down" else self.dual


@dataclass
class StreamedPoset:
    """An infinite (or finite) order seen through prefixes of an enumeration.

    ``elements`` is a zero-argument callable returning a fresh iterator;
    ``compare(x, y)`` answers the order relation.  At most ``budget``
    elements are ever materialized; the axioms are checked once on that
    prefix, which covers every smaller prefix.
    """

    elements: Callable[[], Iterable[Element]]
    compare: Callable[[Element, Element], bool]
    strict: bool
    budget: int
    symbol: str = ""
    name: str = "stream"
    _seen: tuple | None = field(default=None, init=False, repr=False)
    _full: Poset | None = field(default=None, init=False, repr=False)

    def __post_init__(self) -> None:
        if self.budget < 1:
            raise ModelError("stream budget must be positive")
        if not self.symbol:
            self.symbol = "LT" if self.strict else "LE"

    @classmethod
    def from_poset(cls, poset: Poset, budget: int | None = None) -> StreamedPoset:
        """A stream that enumerates a finite poset and then stays constant."""
        return cls(
            lambda: iter(poset.carrier),
            poset.holds,
            poset.strict,
            budget or len(poset.carrier),
            poset.symbol,
            poset.structure.name,
        )

    def materialized(self) -> tuple:
        if self._seen is None:
            self._seen = tuple(itertools.islice(self.elements(), self.budget))
            if len(set(self._seen)) != len(self._seen):
                raise OrderAxiomError(f"stream {self.name!r} enumerates an element twice")
        return self._seen

    def full(self) -> Poset:
        if self._full is None:
            seen = self.materialized()
            rel = [(x, y) for x in seen for y in seen if self.compare(x, y)]
            structure = Structure(self.name, seen, {PredicateSymbol(self.symbol, 2): rel})
            self._full = Poset(structure, self.symbol, self.strict)
        return self._full

    def prefix(self, n: int) -> Poset:
        full = self.full()
        n = min(n, len(full.carrier))
        if n == len(full.carrier):
            return full
        return Poset(full.structure.restrict(full.carrier[:n]), self.symbol, self.strict, check=False)


PosetLike = Union[Poset, StreamedPoset]


def as_poset(source: PosetLike) -> Poset:
    return source.full() if isinstance(source, StreamedPoset) else source


def _check_direction(direction: str) -> None:
    if direction not in DIRECTIONS:
        raise ModelError(f"direction must be one of {DIRECTIONS}, got {direction!r}")


def _check_subset(poset: Poset, A: Iterable[Element]) -> tuple:
    A = tuple(dict.fromkeys(A))
    for a in A:
        if a not in poset.structure:
            raise ModelError(f"{a!r} is not in the carrier")
    return A


def upper_cone(poset: PosetLike, A: Iterable[Element]) -> frozenset:
    poset = as_poset(poset)
    A = _check_subset(poset, A)
    return frozenset(x for x in poset.carrier if all(poset.holds(a, x) for a in A))


def lower_cone(poset: PosetLike, A: Iterable[Element]) -> frozenset:
    poset = as_poset(poset)
    A = _check_subset(poset, A)
    return frozenset(x for x in poset.carrier if all(poset.holds(x, a) for a in A))


def cone(poset: PosetLike, A: Iterable[Element], direction: str) -> frozenset:
    _check_direction(direction)
    return upper_cone(poset, A) if direction == "up" else lower_cone(poset, A)


def minimal_generators(poset: PosetLike, A: Sequence[Element], direction: str = "up", mode: str = "auto") -> tuple:
    """A nonempty ``B`` within ``A`` with the same cone.

    ``exact`` (at most 15 elements) returns a minimum-cardinality ``B``, the
    lexicographically first in ``A``'s order; ``greedy`` drops elements in
    order while the cone is unchanged (inclusion-minimal only); ``auto``
    picks exact when allowed.
    """
    poset = as_poset(poset)
    A = _check_subset(poset, A)
    if not A:
        raise ModelError("minimal generators need a nonempty subset")
    target = cone(poset, A, direction)
    if mode == "auto":
        mode = "exact" if len(A) <= MINIMAL_EXACT_CAP else "greedy"
    if mode == "exact":
        if len(A) > MINIMAL_EXACT_CAP:
            raise ModelError(f"exact generator search is limited to {MINIMAL_EXACT_CAP} elements")
        for size in range(1, len(A) + 1):
            for B in itertools.combinations(A, size):
                if cone(poset, B, direction) == target:
                    return B
        raise AssertionError("unreachable: A generates its own cone")
    if mode == "greedy":
        keep = list(A)
        for a in A:
            trial = [b for b in keep if b != a]
            if trial and cone(poset, trial, direction) == target:
                keep = trial
        return tuple(keep)
    raise ModelError(f"unknown mode {mode!r}")


@dataclass(frozen=True)
class ConeReport:
    subset: tuple
    direction: str
    cone: tuple
    generators: tuple

    @property
    def count(self) -> int:
        return len(self.generators)


def cone_report(poset: PosetLike, A: Sequence[Element], direction: str, mode: str = "auto") -> ConeReport:
    poset = as_poset(poset)
    A = _check_subset(poset, A)
    c = cone(poset, A, direction)
    gens = minimal_generators(poset, A, direction, mode) if A else ()
    return ConeReport(A, direction, tuple(x for x in poset.carrier if x in c), gens)


def incremental_generators(poset: PosetLike, A: Sequence[Element], direction: str) -> tuple:
    """Generators collected in ``A``'s order: the first element, then each
    element that strictly shrinks the cone of those collected so far."""
    poset = as_poset(poset)
    A = _check_subset(poset, A)
    _check_direction(direction)
    if not A:
        return ()
    rel = poset.structure.relation(poset.symbol)
    related = (lambda x, a: (a, x) in rel) if direction == "up" else (lambda x, a: (x, a) in rel)
    gens = [A[0]]
    current = {x for x in poset.carrier if related(x, A[0])}
    for a in A[1:]:
        shrunk = {x for x in current if related(x, a)}
        if shrunk != current:
            gens.append(a)
            current = shrunk
    return tuple(gens)


Selector = Callable[[Sequence[Element]], Iterable[Element]]


def select_all(prefix: Sequence[Element]) -> list:
    return list(prefix)


@dataclass(frozen=True)
class GrowthReport:
    direction: str
    sizes: tuple
    counts: tuple
    stabilized: bool


def generator_growth(
    stream: PosetLike,
    select: Selector = select_all,
    budget: int | None = None,
    direction: str = "down",
) -> GrowthReport:
    """Generator counts of ``select(prefix)`` for prefix sizes ``2..budget``.

    Counts use :func:`incremental_generators`; they are stable under
    growth of the prefix exactly when a fixed finite set keeps generating.
    ``stabilized`` means the counts are constant over the last third of the
    prefixes.
    """
    _check_direction(direction)
    if not isinstance(stream, StreamedPoset):
        stream = StreamedPoset.from_poset(stream)
    budget = budget or stream.budget
    if budget < 2:
        raise ModelError("growth probing needs a budget of at least 2")
    sizes, counts = [], []
    for n in range(2, budget + 1):
        prefix = stream.prefix(n)
        A = [a for a in select(prefix.carrier)]
        sizes.append(len(prefix.carrier))
        counts.append(len(incremental_generators(prefix, A, direction)))
    tail = max(1, len(counts) // 3)
    stable = len(set(counts[-tail:])) == 1
    return GrowthReport(direction, tuple(sizes), tuple(counts), stable)


@dataclass(frozen=True)
class ConeConstruction:
    """Outcome of turning a growing cone into a witness."""

    direction: str
    pairs: tuple
    witness: Witness | None
    exhausted: bool
    reason: str = ""


def cone_to_witness(
    stream: PosetLike, select: Selector = select_all, d: int = 2, direction: str = "down"
) -> ConeConstruction:
    """Build rows ``(a_i, b_i)`` from a cone that keeps shrinking, then refine.

    Starting from the first selected element ``b_0``, repeatedly take the
    first selected ``b`` that strictly shrinks the cone of the ``b``'s so far
    and the first carrier element ``a`` it removes.  This gives ``a_i`` related
    to every earlier ``b_j`` but not to ``b_i``.  The pair sequence is refined
    until ``d`` rows survive: disjoint columns give a staircase, coinciding
    columns a clique (over the dual relation when ``direction`` is up).
    """
    _check_direction(direction)
    if d < 1:
        raise ModelError("depth must be at least 1")
    poset = as_poset(stream)
    symbol = poset.witness_symbol(direction)
    rel = poset.oriented.relation(symbol)
    B = list(dict.fromkeys(select(poset.carrier)))
    if not B:
        return ConeConstruction(direction, (), None, True, "empty selection")
    current = [x for x in poset.carrier if (x, B[0]) in rel]
    pairs: list[tuple] = []
    while True:
        for b in B:
            shrunk = [x for x in current if (x, b) in rel]
            if len(shrunk) < len(current):
                break
        else:
            return ConeConstruction(
                direction, tuple(pairs), None, True, f"cone stopped shrinking after {len(pairs)} rows within the budget"
            )
        a = next(x for x in current if (x, b) not in rel)
        pairs.append((a, b))
        current = shrunk
        if len(pairs) < d:
            continue
        refined = refine_tuples(pairs)
        if len(refined) < d:
            continue
        rows = [pairs[i] for i in refined.indices[:d]]
        if len(refined.columns) == 1:
            w: Witness = CliqueWitness(symbol, tuple(a for a, _ in rows))
        else:
            w = StaircaseWitness(symbol, 1, 1, tuple(((a,), (b,)) for a, b in rows))
        return ConeConstruction(direction, tuple(pairs), w, False)


@dataclass(frozen=True)
class ConeEvidence:
    """For each proposed generating subset ``C``, an element of ``C``'s cone outside ``B``'s."""

    direction: str
    B: tuple
    evidence: tuple

    def is_valid(self, poset: PosetLike) -> bool:
        full = cone(poset, self.B, self.direction)
        for C, x in self.evidence:
            if x in full or x not in cone(poset, C, self.direction):
                return False
        return True


def witness_to_cone(stream: PosetLike, w: Witness) -> ConeEvidence:
    """Show that no subset of the first ``d-1`` generators generates ``B``'s cone.

    ``B`` is the witness's ``b`` column (its sequence for a clique).  For
    every nonempty ``C`` among ``b_1..b_{d-1}`` with largest index ``m``, the
    element ``a_{m+1}`` lies in ``C``'s cone but not in ``B``'s.
    """
    poset = as_poset(stream)
    if w.symbol == poset.symbol:
        direction = "down"
    elif w.symbol == poset.dual:
        direction = "up"
    else:
        raise ModelError(f"witness symbol {w.symbol!r} is not the order {poset.symbol!r} or its dual")
    if isinstance(w, StaircaseWitness):
        if not verify_staircase(poset.oriented, w):
            raise ModelError("witness does not verify")
        a_col = [a[0] for a, _ in w.rows]
        B = tuple(b[0] for _, b in w.rows)
    else:
        if not verify_clique(poset.oriented, w):
            raise ModelError("witness does not verify")
        a_col = list(w.elements)
        B = tuple(w.elements)
    evidence = []
    for size in range(1, len(B)):
        for idx in itertools.combinations(range(len(B) - 1), size):
            evidence.append((tuple(B[i] for i in idx), a_col[max(idx) + 1]))
    return ConeEvidence(direction, B, tuple(evidence))


@dataclass(frozen=True)
class PosetReport:
    strict: bool
    depth: int
    staircases: dict
    cliques: dict
    growth: dict
    constructions: dict
    checks: tuple

    @property
    def consistent(self) -> bool:
        return all(ok for _, ok in self.checks)

    def fired(self) -> dict:
        out = {f"staircase-{k}": v is not None for k, v in self.staircases.items()}
        out.update({f"clique-{k}": v is not None for k, v in self.cliques.items()})
        out.update({f"growth-{k}": not g.stabilized for k, g in self.growth.items()})
        return out


def analyze_poset(source: PosetLike, d: int, budget: int | None = None, select: Selector = select_all) -> PosetReport:
    """Run every detector in both orientations and cross-check them.

    Checks (each recorded as ``(name, ok)``): every found witness verifies,
    has generator count at least ``d`` on its own ``B`` and yields valid cone
    evidence; every non-stabilizing growth direction is turned into a
    verifying depth-``d`` witness; no clique exists for a nonstrict order.
    """
    if isinstance(source, StreamedPoset) and budget is not None and budget != source.budget:
        source = StreamedPoset(source.elements, source.compare, source.strict, budget, source.symbol, source.name)
    poset = as_poset(source)
    oriented = poset.oriented
    staircases, cliques, growth, constructions = {}, {}, {}, {}
    checks: list[tuple[str, bool]] = []
    for direction in DIRECTIONS:
        sym = poset.witness_symbol(direction)
        staircases[direction] = find_staircase(oriented, sym, 1, 1, d)
        if poset.strict:
            cliques[direction] = find_clique(oriented, sym, d)
        growth[direction] = generator_growth(source, select, None, direction)
    if not poset.strict:
        checks.append(("no clique in a reflexive order", find_clique(oriented, poset.symbol, 1) is None))
    for label, found in [("staircase", staircases), ("clique", cliques)]:
        for direction, w in found.items():
            if w is None:
                continue
            ok = verify_staircase(oriented, w) if isinstance(w, StaircaseWitness) else verify_clique(oriented, w)
            checks.append((f"{label}-{direction} verifies", ok))
            B = [b[0] for _, b in w.rows] if isinstance(w, StaircaseWitness) else list(w.elements)
            count = len(incremental_generators(poset, B, direction))
            checks.append((f"{label}-{direction} generator count >= {d}", count >= d))
            checks.append((f"{label}-{direction} cone evidence", witness_to_cone(poset, w).is_valid(poset)))
    for direction, g in growth.items():
        if g.stabilized:
            continue
        built = cone_to_witness(source, select, d, direction)
        constructions[direction] = built
        w = built.witness
        ok = w is not None and (
            verify_staircase(oriented, w) if isinstance(w, StaircaseWitness) else verify_clique(oriented, w)
        )
        checks.append((f"growth-{direction} yields a depth-{d} witness", ok))
    return PosetReport(poset.strict, d, staircases, cliques, growth, constructions, tuple(checks))
