"""Derived predicates: reordering, projection (fixing positions) and gluing.

Positions are 1-based throughout, matching the textual formats and CLI.
A derived predicate is built in the fixed order reorder -> project -> glue.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from .model import Element, ModelError, PredicateSymbol, Structure


@dataclass(frozen=True)
class ProjectionSpec:
    """Fix the positions in ``fixings`` to elements; the rest are kept in ascending order."""

    symbol: str
    fixings: tuple

    def __post_init__(self) -> None:
        items = self.fixings.items() if isinstance(self.fixings, Mapping) else self.fixings
        fixings = tuple(sorted((int(pos), e) for pos, e in items))
        if len({pos for pos, _ in fixings}) != len(fixings):
            raise ModelError("a position is fixed twice")
        object.__setattr__(self, "fixings", fixings)

    def kept(self, arity: int) -> tuple[int, ...]:
        fixed = {pos for pos, _ in self.fixings}
        return tuple(i for i in range(1, arity + 1) if i not in fixed)


@dataclass(frozen=True)
class Partition:
    """An exact partition of ``{1..k}``; block ``j`` supplies argument ``j``."""

    blocks: tuple

    def __post_init__(self) -> None:
        blocks = tuple(tuple(sorted(int(i) for i in b)) for b in self.blocks)
        if any(not b for b in blocks):
            raise ModelError("partition blocks must be nonempty")
        members = [i for b in blocks for i in b]
        if len(set(members)) != len(members):
            raise ModelError(f"partition blocks overlap: {blocks}")
        object.__setattr__(self, "blocks", tuple(sorted(blocks, key=lambda b: b[0])))

    @classmethod
    def identity(cls, k: int) -> Partition:
        return cls(tuple((i,) for i in range(1, k + 1)))

    @classmethod
    def clique_split(cls, k: int) -> Partition:
        """``{{1}, {2..k}}``, the gluing used for the clique branch."""
        if k < 2:
            raise ModelError("the clique split needs at least two positions")
        return cls(((1,), tuple(range(2, k + 1))))

    @classmethod
    def parse(cls, text: str) -> Partition:
        """Parse ``"1|2,3"`` into ``{{1},{2,3}}``."""
        try:
            return cls(tuple(tuple(int(x) for x in part.split(",")) for part in text.split("|")))
        except ValueError:
            raise ModelError(f"cannot parse partition {text!r}; expected e.g. 1|2,3") from None

    def __len__(self) -> int:
        return len(self.blocks)

    @property
    def size(self) -> int:
        return sum(len(b) for b in self.blocks)

    def check_exact(self, k: int) -> None:
        if sorted(i for b in self.blocks for i in b) != list(range(1, k + 1)):
            raise ModelError(f"{self} is not an exact partition of 1..{k}")

    def is_identity(self) -> bool:
        return all(len(b) == 1 for b in self.blocks)

    def __str__(self) -> str:
        return "".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks)


def all_partitions(k: int) -> Iterator[Partition]:
    """Every exact partition of ``{1..k}``, via restricted growth strings."""

    def grow(prefix: list[int], top: int) -> Iterator[list[int]]:
        if len(prefix) == k:
            yield prefix
            return
        for b in range(top + 2):
            yield from grow(prefix + [b], max(top, b))

    if k == 0:
        return
    for rgs in grow([0], 0):
        blocks: dict[int, list[int]] = {}
        for pos, b in enumerate(rgs, start=1):
            blocks.setdefault(b, []).append(pos)
        yield Partition(tuple(tuple(v) for v in blocks.values()))


def _check_permutation(permutation: Sequence[int], n: int) -> tuple[int, ...]:
    perm = tuple(int(i) for i in permutation)
    if sorted(perm) != list(range(1, n + 1)):
        raise ModelError(f"{perm} is not a permutation of 1..{n}")
    return perm


# -- relation-level primitives -------------------------------------------


def reorder_relation(rel: Iterable[tuple], permutation: Sequence[int]) -> frozenset:
    return frozenset(tuple(t[s - 1] for s in permutation) for t in rel)


def project_relation(rel: Iterable[tuple], fixings: Sequence[tuple[int, Element]], arity: int) -> frozenset:
    fixed = {pos - 1: e for pos, e in fixings}
    kept = [i for i in range(arity) if i not in fixed]
    return frozenset(
        tuple(t[i] for i in kept) for t in rel if all(t[i] == e for i, e in fixed.items())
    )


def glue_relation(rel: Iterable[tuple], partition: Partition) -> frozenset:
    blocks = [[i - 1 for i in b] for b in partition.blocks]
    out = set()
    for t in rel:
        if all(all(t[i] == t[b[0]] for i in b) for b in blocks):
            out.add(tuple(t[b[0]] for b in blocks))
    return frozenset(out)


# -- structure-level operations ------------------------------------------


def _check_fixings(structure: Structure, fixings: Sequence[tuple[int, Element]], arity: int) -> None:
    for pos, e in fixings:
        if not 1 <= pos <= arity:
            raise ModelError(f"position {pos} out of range 1..{arity}")
        if e not in structure:
            raise ModelError(f"fixing element {e!r} is not in the universe")
    if not 0 < arity - len(fixings) < arity:
        raise ModelError(f"a projection must keep between 1 and {arity - 1} positions")


def project_predicate(structure: Structure, spec: ProjectionSpec) -> frozenset:
    sym = structure.symbol(spec.symbol)
    _check_fixings(structure, spec.fixings, sym.arity)
    return project_relation(structure.relation(spec.symbol), spec.fixings, sym.arity)


def glue_predicate(structure: Structure, symbol: str, partition: Partition) -> frozenset:
    sym = structure.symbol(symbol)
    partition.check_exact(sym.arity)
    return glue_relation(structure.relation(symbol), partition)


def reorder_predicate(structure: Structure, symbol: str, permutation: Sequence[int]) -> frozenset:
    """``(t[s1], ..., t[sn])`` for every tuple ``t``, where ``permutation = (s1, ..., sn)``."""
    sym = structure.symbol(symbol)
    return reorder_relation(structure.relation(symbol), _check_permutation(permutation, sym.arity))


@dataclass(frozen=True)
class DerivedPredicateSpec:
    """Recipe turning relation ``source`` into a new relation ``name``.

    Each stage is optional; ``fixings`` positions refer to the coordinates
    after reordering, and the partition acts on the kept positions renumbered
    ``1..k``.
    """

    source: str
    name: str
    permutation: tuple | None = None
    fixings: tuple = ()
    partition: Partition | None = None

    def __post_init__(self) -> None:
        items = self.fixings.items() if isinstance(self.fixings, Mapping) else self.fixings
        object.__setattr__(self, "fixings", tuple(sorted((int(p), e) for p, e in items)))
        if self.permutation is not None:
            object.__setattr__(self, "permutation", tuple(self.permutation))

    def arities(self, n: int) -> tuple[int, int, int]:
        """(source arity, arity after projection, final arity)."""
        if self.permutation is not None:
            _check_permutation(self.permutation, n)
        k = n - len(self.fixings)
        if self.fixings and not 0 < k < n:
            raise ModelError(f"{self.name}: projection must keep between 1 and {n - 1} positions")
        for pos, _ in self.fixings:
            if not 1 <= pos <= n:
                raise ModelError(f"{self.name}: fixed position {pos} out of range 1..{n}")
        m = k
        if self.partition is not None:
            self.partition.check_exact(k)
            m = len(self.partition)
        return n, k, m

    def is_identity(self) -> bool:
        return (
            (self.permutation is None or self.permutation == tuple(range(1, len(self.permutation) + 1)))
            and not self.fixings
            and (self.partition is None or self.partition.is_identity())
        )

    def relation(self, structure: Structure) -> frozenset:
        sym = structure.symbol(self.source)
        n, _, _ = self.arities(sym.arity)
        rel = structure.relation(self.source)
        if self.permutation is not None:
            rel = reorder_relation(rel, self.permutation)
        if self.fixings:
            _check_fixings(structure, self.fixings, n)
            rel = project_relation(rel, self.fixings, n)
        if self.partition is not None:
            rel = glue_relation(rel, self.partition)
        return rel

    def expand(self, args: Sequence, n: int) -> tuple:
        """Map arguments of the derived predicate to arguments of the source.

        Works for any argument objects (elements or terms): the derived
        predicate holds at ``args`` iff the source holds at the result.
        """
        _, k, m = self.arities(n)
        if len(args) != m:
            raise ModelError(f"{self.name} takes {m} arguments, got {len(args)}")
        if self.partition is not None:
            glued: list = [None] * k
            for j, block in enumerate(self.partition.blocks):
                for i in block:
                    glued[i - 1] = args[j]
        else:
            glued = list(args)
        fixed = dict(self.fixings)
        it = iter(glued)
        reordered = [fixed[i] if i in fixed else next(it) for i in range(1, n + 1)]
        if self.permutation is None:
            return tuple(reordered)
        original: list = [None] * n
        for i, s in enumerate(self.permutation):
            original[s - 1] = reordered[i]
        return tuple(original)

    def describe(self) -> str:
        parts = []
        if self.permutation is not None:
            parts.append("reorder(" + ",".join(map(str, self.permutation)) + ")")
        if self.fixings:
            parts.append("fix(" + ",".join(f"{p}={e}" for p, e in self.fixings) + ")")
        if self.partition is not None:
            parts.append(f"glue{self.partition}")
        return f"{self.name} := {self.source}" + ("" if not parts else " | " + " | ".join(parts))


def derive_structure(structure: Structure, specs: Sequence[DerivedPredicateSpec]) -> Structure:
    """``structure`` with one extra relation per spec, on the same universe.

    Specs are applied in order, so a later spec may use an earlier one's
    result as its source.
    """
    for spec in specs:
        sym = structure.symbol(spec.source)
        _, _, m = spec.arities(sym.arity)
        structure = structure.with_relations({PredicateSymbol(spec.name, m): spec.relation(structure)})
    return structure
