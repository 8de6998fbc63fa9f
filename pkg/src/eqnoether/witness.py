"""Forbidden patterns for equational Noetherianity, searched to a finite depth.

A staircase of depth d over an n-ary predicate ``P`` split as ``p + t`` is a
sequence of rows ``(a^i, b^i)`` with all coordinates pairwise distinct,
``P(a^i + b^i)`` false and ``P(a^i + b^j)`` true for every ``j < i``.  A clique
over a binary ``P`` is a sequence ``a_i`` with ``P(a_i, a_i)`` false and
``P(a_i, a_j)`` true for ``j < i``.  Either pattern, if it went on forever,
would refute Noetherianity; here the search is bounded by ``d``, so a hit
means "witness of depth d found" and nothing stronger.
"""

from __future__ import annotations

import itertools
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Sequence, Union

from .model import (
    Atom,
    Const,
    Element,
    ModelError,
    PredicateSymbol,
    Structure,
    Var,
    check_kotov_prefix,
)
from .predicates import DerivedPredicateSpec, Partition, all_partitions, derive_structure


class WitnessError(ValueError):
    """Invalid search parameters or a witness that does not fit its structure."""


@dataclass(frozen=True)
class StaircaseWitness:
    symbol: str
    p: int
    t: int
    rows: tuple

    def __post_init__(self) -> None:
        rows = tuple((tuple(a), tuple(b)) for a, b in self.rows)
        object.__setattr__(self, "rows", rows)

    @property
    def depth(self) -> int:
        return len(self.rows)

    def truncate(self, d: int) -> StaircaseWitness:
        return StaircaseWitness(self.symbol, self.p, self.t, self.rows[:d])

    def elements(self) -> list:
        return [e for a, b in self.rows for e in a + b]


@dataclass(frozen=True)
class CliqueWitness:
    symbol: str
    elements: tuple

    def __post_init__(self) -> None:
        object.__setattr__(self, "elements", tuple(self.elements))

    @property
    def depth(self) -> int:
        return len(self.elements)

    def truncate(self, d: int) -> CliqueWitness:
        return CliqueWitness(self.symbol, self.elements[:d])


Witness = Union[StaircaseWitness, CliqueWitness]


# -- staircases --------------------------------------------------------------


def _check_staircase_shape(structure: Structure, w: StaircaseWitness) -> None:
    sym = structure.symbol(w.symbol)
    if w.p < 1 or w.t < 1 or w.p + w.t != sym.arity:
        raise WitnessError(f"split ({w.p},{w.t}) does not fit {sym}")
    for a, b in w.rows:
        if len(a) != w.p or len(b) != w.t:
            raise WitnessError(f"row {(a, b)} does not match split ({w.p},{w.t})")
        for e in a + b:
            if e not in structure:
                raise ModelError(f"witness element {e!r} is not in the universe")


def verify_staircase(structure: Structure, w: StaircaseWitness) -> bool:
    _check_staircase_shape(structure, w)
    coords = w.elements()
    if len(set(coords)) != len(coords):
        return False
    rel = structure.relation(w.symbol)
    for i, (a, b) in enumerate(w.rows):
        if a + b in rel:
            return False
        if any(a + w.rows[j][1] not in rel for j in range(i)):
            return False
    return True


def find_staircase(structure: Structure, symbol: str, p: int, t: int, d: int) -> StaircaseWitness | None:
    """First depth-``d`` staircase in lexicographic universe order, or ``None``.

    Exhaustive DFS over rows.  Candidate ``a`` parts for row i are drawn from
    the tuples completing every earlier ``b`` to a member of ``P``; a ``b`` part
    is rejected early when too few such ``a`` parts remain for the rows still
    to be placed.
    """
    sym = structure.symbol(symbol)
    if p < 1 or t < 1 or p + t != sym.arity:
        raise WitnessError(f"split ({p},{t}) does not fit {sym}")
    if d < 1:
        raise WitnessError("depth must be at least 1")
    width = p + t
    order = structure.universe
    if len(order) < d * width:
        return None
    rel = structure.relation(symbol)
    key = structure.sort_key
    completions: dict[tuple, frozenset] = {}
    tmp: dict[tuple, set] = defaultdict(set)
    for tup in rel:
        if len(set(tup)) == width:
            tmp[tup[p:]].add(tup[:p])
    completions = {b: frozenset(a_set) for b, a_set in tmp.items()}
    suffixes = sorted(completions, key=key)
    all_a = list(itertools.permutations(order, p))
    all_b = list(itertools.permutations(order, t))
    rows: list[tuple[tuple, tuple]] = []
    used: set = set()

    def extend(cands: frozenset | None) -> bool:
        i = len(rows)
        if i == d:
            return True
        later = d - i - 1
        if len(order) - len(used) < (later + 1) * width:
            return False
        a_iter = all_a if cands is None else sorted(cands, key=key)
        b_iter = all_b if later == 0 else suffixes
        for a in a_iter:
            if not used.isdisjoint(a):
                continue
            used.update(a)
            for b in b_iter:
                if not used.isdisjoint(b) or a + b in rel:
                    continue
                future = completions.get(b, frozenset()) if cands is None else cands & completions.get(b, frozenset())
                if later:
                    blocked = used.union(b)
                    if sum(1 for f in future if blocked.isdisjoint(f)) < later:
                        continue
                rows.append((a, b))
                used.update(b)
                if extend(future):
                    return True
                rows.pop()
                used.difference_update(b)
            used.difference_update(a)
        return False

    if extend(None):
        return StaircaseWitness(symbol, p, t, tuple(rows))
    return None


# -- cliques -------------------------------------------------------------------


def _binary(structure: Structure, symbol: str) -> PredicateSymbol:
    sym = structure.symbol(symbol)
    if sym.arity != 2:
        raise WitnessError(f"cliques need a binary predicate, {sym} is not")
    return sym


def verify_clique(structure: Structure, w: CliqueWitness) -> bool:
    _binary(structure, w.symbol)
    for e in w.elements:
        if e not in structure:
            raise ModelError(f"witness element {e!r} is not in the universe")
    rel = structure.relation(w.symbol)
    seq = w.elements
    for i, x in enumerate(seq):
        if (x, x) in rel:
            return False
        if any((x, seq[j]) not in rel for j in range(i)):
            return False
    return True


def find_clique(structure: Structure, symbol: str, d: int) -> CliqueWitness | None:
    _binary(structure, symbol)
    if d < 1:
        raise WitnessError("depth must be at least 1")
    rel = structure.relation(symbol)
    key = structure.index
    loopless = frozenset(e for e in structure.universe if (e, e) not in rel)
    below: dict = defaultdict(set)
    for x, y in rel:
        if x in loopless:
            below[y].add(x)
    below = {y: frozenset(xs) for y, xs in below.items()}
    seq: list = []

    def extend(cands: frozenset | None) -> bool:
        i = len(seq)
        if i == d:
            return True
        later = d - i - 1
        pool = loopless if cands is None else cands
        for x in sorted(pool, key=key):
            if x in seq:
                continue
            future = below.get(x, frozenset()) if cands is None else cands & below.get(x, frozenset())
            if later and sum(1 for f in future if f != x and f not in seq) < later:
                continue
            seq.append(x)
            if extend(future):
                return True
            seq.pop()
        return False

    if extend(None):
        return CliqueWitness(symbol, tuple(seq))
    return None


# -- tuple refinement ------------------------------------------------------------


@dataclass(frozen=True)
class Singleton:
    value: Element


class _AllDistinct:
    def __repr__(self) -> str:
        return "ALL_DISTINCT"


ALL_DISTINCT = _AllDistinct()


@dataclass(frozen=True)
class RefinedSequence:
    """Selected rows of a tuple sequence plus the per-column verdicts.

    ``columns`` partitions the 1-based column indices by row-wise equality
    on the selection.
    """

    indices: tuple
    verdicts: tuple
    columns: Partition

    def __len__(self) -> int:
        return len(self.indices)

    def rows(self, D: Sequence[Sequence]) -> list[tuple]:
        return [tuple(D[i]) for i in self.indices]


def _column_partition(D: Sequence[Sequence], indices: Sequence[int], n: int) -> Partition:
    blocks: list[list[int]] = []
    for j in range(n):
        for block in blocks:
            if all(D[r][block[0]] == D[r][j] for r in indices):
                block.append(j)
                break
        else:
            blocks.append([j])
    return Partition(tuple(tuple(i + 1 for i in b) for b in blocks))


def refinement_is_valid(D: Sequence[Sequence], rs: RefinedSequence) -> bool:
    """Both refinement conditions plus agreement of the recorded verdicts."""
    idx = list(rs.indices)
    if not idx or idx != sorted(set(idx)) or idx[0] < 0 or idx[-1] >= len(D):
        return False
    n = len(D[0])
    cols = [[D[r][j] for r in idx] for j in range(n)]
    for col, verdict in zip(cols, rs.verdicts):
        if isinstance(verdict, Singleton):
            if any(v != verdict.value for v in col):
                return False
        elif len(set(col)) != len(col):
            return False
    for j1, j2 in itertools.combinations(range(n), 2):
        if cols[j1] != cols[j2] and set(cols[j1]) & set(cols[j2]):
            return False
    return rs.columns == _column_partition(D, idx, n)


def refine_tuples(D: Sequence[Sequence]) -> RefinedSequence:
    """Greedy finite version of the tuple-refinement procedure.

    Column by column, keep either the rows holding the most frequent value or
    the first occurrence of every value, whichever retains more rows.  Then
    reconcile each pair of columns in lexicographic order: two distinct-valued
    columns keep either their row-wise equal rows or the rows surviving the
    removal procedure (each kept row evicts the at most two later rows reusing
    one of its values in the other column).
    """
    if not D:
        raise WitnessError("cannot refine an empty sequence")
    n = len(D[0])
    if any(len(row) != n for row in D):
        raise WitnessError("rows have different lengths")
    rows = list(range(len(D)))
    verdicts: list = []
    for j in range(n):
        counts = Counter(D[r][j] for r in rows)
        value, top = counts.most_common(1)[0]
        if top >= len(counts):
            verdicts.append(Singleton(value))
            rows = [r for r in rows if D[r][j] == value]
        else:
            verdicts.append(ALL_DISTINCT)
            seen: set = set()
            kept = []
            for r in rows:
                if D[r][j] not in seen:
                    seen.add(D[r][j])
                    kept.append(r)
            rows = kept

    for j1, j2 in itertools.combinations(range(n), 2):
        v1, v2 = verdicts[j1], verdicts[j2]
        if isinstance(v1, Singleton) and isinstance(v2, Singleton):
            continue
        if isinstance(v1, Singleton) or isinstance(v2, Singleton):
            const, other = (v1.value, j2) if isinstance(v1, Singleton) else (v2.value, j1)
            remaining = [r for r in rows if D[r][other] != const]
            if remaining:
                rows = remaining
            else:
                # One row left whose value equals the constant: the column is constant too.
                verdicts[other] = Singleton(const)
            continue
        equal = [r for r in rows if D[r][j1] == D[r][j2]]
        unequal = [r for r in rows if D[r][j1] != D[r][j2]]
        kept, dropped = [], set()
        for pos, r in enumerate(unequal):
            if r in dropped:
                continue
            kept.append(r)
            x, y = D[r][j1], D[r][j2]
            for s in unequal[pos + 1:]:
                if s not in dropped and (D[s][j2] == x or D[s][j1] == y):
                    dropped.add(s)
        rows = equal if equal and len(equal) >= len(kept) else kept
    return RefinedSequence(tuple(rows), tuple(verdicts), _column_partition(D, rows, n))


REFINE_EXACT_CAP = 10


def _selection_verdicts(D: Sequence[Sequence], idx: Sequence[int], n: int) -> tuple | None:
    cols = [[D[r][j] for r in idx] for j in range(n)]
    verdicts = []
    for col in cols:
        distinct = len(set(col))
        if distinct == 1:
            verdicts.append(Singleton(col[0]))
        elif distinct == len(col):
            verdicts.append(ALL_DISTINCT)
        else:
            return None
    for j1, j2 in itertools.combinations(range(n), 2):
        if cols[j1] != cols[j2] and set(cols[j1]) & set(cols[j2]):
            return None
    return tuple(verdicts)


def refine_tuples_exact(D: Sequence[Sequence]) -> RefinedSequence:
    """Largest valid selection by subset enumeration (lexicographically first among ties)."""
    if not D:
        raise WitnessError("cannot refine an empty sequence")
    if len(D) > REFINE_EXACT_CAP:
        raise WitnessError(f"exact refinement is limited to {REFINE_EXACT_CAP} rows")
    n = len(D[0])
    for size in range(len(D), 0, -1):
        for idx in itertools.combinations(range(len(D)), size):
            verdicts = _selection_verdicts(D, idx, n)
            if verdicts is not None:
                return RefinedSequence(idx, verdicts, _column_partition(D, idx, n))
    raise AssertionError("unreachable: a single row is always valid")


# -- Kotov sequences, restoration ---------------------------------------------


@dataclass(frozen=True)
class KotovSequence:
    """Equations ``s_1..s_d`` and points ``a_1..a_d`` (values in variable order)."""

    variables: tuple
    equations: tuple
    points: tuple

    def assignments(self) -> list[dict]:
        return [dict(zip(self.variables, p)) for p in self.points]

    def holds(self, structure: Structure) -> bool:
        return check_kotov_prefix(structure, self.equations, self.assignments())


def _verify(structure: Structure, w: Witness) -> bool:
    return verify_staircase(structure, w) if isinstance(w, StaircaseWitness) else verify_clique(structure, w)


def witness_to_kotov(w: Witness, structure: Structure | None = None) -> KotovSequence:
    """Staircase -> ``P(x1..xp, b^i)`` at ``a^i``; clique -> ``P(x, a_i)`` at ``a_i``.

    When ``structure`` is given the witness is verified first.
    """
    if structure is not None and not _verify(structure, w):
        raise WitnessError("witness does not verify; refusing to convert it")
    if isinstance(w, StaircaseWitness):
        sym = PredicateSymbol(w.symbol, w.p + w.t)
        xs = tuple(f"x{i}" for i in range(1, w.p + 1))
        eqs = tuple(Atom(sym, tuple(Var(x) for x in xs) + tuple(Const(e) for e in b)) for _, b in w.rows)
        return KotovSequence(xs, eqs, tuple(a for a, _ in w.rows))
    sym = PredicateSymbol(w.symbol, 2)
    eqs = tuple(Atom(sym, (Var("x"), Const(e))) for e in w.elements)
    return KotovSequence(("x",), eqs, tuple((e,) for e in w.elements))


def restore_witness(structure: Structure, w: Witness, spec: DerivedPredicateSpec) -> KotovSequence:
    """Pull a witness over a derived predicate back to equations over its source.

    ``structure`` must contain the source relation.  The derived equations
    ``Q(args)`` become ``P(expand(args))``; since ``Q`` holds exactly where
    ``P`` holds on the expansion, the Kotov condition carries over unchanged.
    """
    if w.symbol != spec.name:
        raise WitnessError(f"witness is over {w.symbol!r} but the spec defines {spec.name!r}")
    sym = structure.symbol(spec.source)
    _, _, m = spec.arities(sym.arity)
    arity = w.p + w.t if isinstance(w, StaircaseWitness) else 2
    if arity != m:
        raise WitnessError(f"witness arity {arity} does not match derived arity {m}")
    derived = witness_to_kotov(w)
    equations = []
    for eq in derived.equations:
        args = spec.expand(eq.args, sym.arity)
        equations.append(Atom(sym, tuple(a if isinstance(a, (Var, Const)) else Const(a) for a in args)))
    return KotovSequence(derived.variables, tuple(equations), derived.points)


# -- bounded criterion scan --------------------------------------------------


@dataclass(frozen=True)
class ScanCaps:
    """Bounds on the projection enumeration of :func:`criterion_scan`.

    ``max_fixed`` caps the number of fixed positions, ``max_fixings`` the
    number of fixing tuples tried per position set; ``None`` means unbounded.
    ``extra_pool`` adds elements to the fixing candidates.
    """

    max_fixed: int | None = None
    max_fixings: int | None = None
    extra_pool: tuple = ()

    def __post_init__(self) -> None:
        if self.max_fixed is not None and self.max_fixed < 0:
            raise WitnessError(f"max_fixed must be non-negative or None, got {self.max_fixed}")
        if self.max_fixings is not None and self.max_fixings < 1:
            raise WitnessError(f"max_fixings must be positive or None, got {self.max_fixings}")
        object.__setattr__(self, "extra_pool", tuple(self.extra_pool))


@dataclass(frozen=True)
class Finding:
    spec: DerivedPredicateSpec
    witness: Witness

    @property
    def kind(self) -> str:
        return "staircase" if isinstance(self.witness, StaircaseWitness) else "clique"


@dataclass(frozen=True)
class CriterionReport:
    depth: int
    caps: ScanCaps
    findings: tuple
    exhaustive: bool
    searched: int = 0
    symbols: tuple = field(default=())

    def for_symbol(self, name: str) -> list[Finding]:
        return [f for f in self.findings if f.spec.source == name]


def _derived_name(symbol: str, fixings: Sequence[tuple[int, Element]], partition: Partition) -> str:
    fix = "[" + ",".join(f"{p}={e}" for p, e in fixings) + "]" if fixings else ""
    return f"{symbol}{fix}/{partition}"


def fixing_pool(structure: Structure, symbol: str, extra: Sequence[Element] = ()) -> tuple:
    """Elements occurring in some tuple of ``symbol``, then ``extra``, in universe order."""
    occurring = {e for tup in structure.relation(symbol) for e in tup}
    pool = [e for e in structure.universe if e in occurring]
    for e in extra:
        if e not in structure:
            raise ModelError(f"extra pool element {e!r} is not in the universe")
        if e not in occurring and e not in pool:
            pool.append(e)
    return tuple(pool)


def criterion_scan(structure: Structure, d: int, caps: ScanCaps | None = None) -> CriterionReport:
    """Search every projection/gluing of every predicate for a depth-``d`` witness.

    For each symbol ``P`` of arity ``n``, each set of fixed positions (only
    those leaving at least two free positions can host a pattern) and each
    fixing tuple from the candidate pool, and each exact partition ``I`` of
    the kept positions: ``|I| > 1`` searches staircases of ``P'/I`` for all
    splits, ``|I| = 1`` searches cliques of ``P'/{{1},{2..k}}``.
    """
    caps = caps or ScanCaps()
    if d < 1:
        raise WitnessError("depth must be at least 1")
    findings: list[Finding] = []
    exhaustive = True
    searched = 0
    for sym in structure.symbols:
        n = sym.arity
        pool = fixing_pool(structure, sym.name, caps.extra_pool)
        for n_fixed in range(0, n - 1):
            if caps.max_fixed is not None and n_fixed > caps.max_fixed:
                exhaustive = False
                break
            k = n - n_fixed
            for positions in itertools.combinations(range(1, n + 1), n_fixed):
                tuples = itertools.product(pool, repeat=n_fixed)
                if caps.max_fixings is not None and len(pool) ** n_fixed > caps.max_fixings:
                    exhaustive = False
                    tuples = itertools.islice(tuples, caps.max_fixings)
                for values in tuples:
                    fixings = tuple(zip(positions, values))
                    if fixings:
                        base = DerivedPredicateSpec(sym.name, "_probe", fixings=fixings)
                        if d >= 2 and not base.relation(structure):
                            continue
                    for partition in all_partitions(k):
                        if len(partition) > 1:
                            spec = DerivedPredicateSpec(
                                sym.name, _derived_name(sym.name, fixings, partition), fixings=fixings, partition=partition
                            )
                            derived = derive_structure(structure, [spec])
                            m = len(partition)
                            for p in range(1, m):
                                searched += 1
                                w = find_staircase(derived, spec.name, p, m - p, d)
                                if w is not None:
                                    findings.append(Finding(spec, w))
                        else:
                            split = Partition.clique_split(k)
                            spec = DerivedPredicateSpec(
                                sym.name, _derived_name(sym.name, fixings, split), fixings=fixings, partition=split
                            )
                            derived = derive_structure(structure, [spec])
                            searched += 1
                            w = find_clique(derived, spec.name, d)
                            if w is not None:
                                findings.append(Finding(spec, w))
    return CriterionReport(
        depth=d,
        caps=caps,
        findings=tuple(findings),
        exhaustive=exhaustive,
        searched=searched,
        symbols=tuple(s.name for s in structure.symbols),
    )


def derived_structure_for(structure: Structure, finding: Finding) -> Structure:
    """The structure in which ``finding.witness`` verifies."""
    return derive_structure(structure, [finding.spec])


# -- graphs ----------------------------------------------------------------------


GRAPH_KINDS = ("simple", "loops")


@dataclass(frozen=True)
class GraphReport:
    kind: str
    depth: int
    staircase: StaircaseWitness | None
    clique: CliqueWitness | None
    clique_searched: bool

    @property
    def hit(self) -> bool:
        return self.staircase is not None or self.clique is not None


def graph_analyze(structure: Structure, d: int, kind: str = "simple", symbol: str = "E") -> GraphReport:
    """Staircase search, plus clique search for simple graphs.

    Graphs with loops have a reflexive edge relation, so a clique can never
    exist there and is not searched.
    """
    _binary(structure, symbol)
    rel = structure.relation(symbol)
    if any((y, x) not in rel for x, y in rel):
        raise WitnessError(f"edge relation {symbol} is not symmetric")
    if kind == "simple":
        loops = [x for x, y in rel if x == y]
        if loops:
            raise WitnessError(f"graph declared simple has a loop at {loops[0]!r}")
    elif kind == "loops":
        missing = [e for e in structure.universe if (e, e) not in rel]
        if missing:
            raise WitnessError(f"graph declared with loops lacks a loop at {missing[0]!r}")
    else:
        raise WitnessError(f"unknown graph kind {kind!r}; expected one of {GRAPH_KINDS}")
    staircase = find_staircase(structure, symbol, 1, 1, d)
    clique = find_clique(structure, symbol, d) if kind == "simple" else None
    return GraphReport(kind, d, staircase, clique, kind == "simple")
