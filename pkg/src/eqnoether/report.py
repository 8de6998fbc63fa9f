"""JSON reports: plain dicts built in a fixed order, serialized deterministically.

Every report is an envelope ``{"schema": 1, "command": ..., "input": ...,
"result": ...}``.  Elements are written as JSON ints or strings; tuples become
arrays.  No timings or other run-dependent values are included, so reports
for the same input are byte-identical.
"""

from __future__ import annotations

import json
from importlib import resources
from typing import Any, Iterable

from .model import AlgebraicSet, Atom, Element, EquationSystem, Structure, Var
from .posets import ConeConstruction, ConeEvidence, GrowthReport, PosetReport
from .predicates import DerivedPredicateSpec
from .witness import (
    CliqueWitness,
    CriterionReport,
    KotovSequence,
    RefinedSequence,
    Singleton,
    StaircaseWitness,
    Witness,
)

SCHEMA_VERSION = 1


def schema() -> dict:
    """The shipped JSON schema for report envelopes."""
    text = resources.files("eqnoether").joinpath("schema/report.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def element(e: Element) -> Any:
    return e if isinstance(e, (int, str)) and not isinstance(e, bool) else str(e)


def tup(t: Iterable[Element]) -> list:
    return [element(e) for e in t]


def relation(structure: Structure, rel: Iterable[tuple]) -> list:
    return [tup(t) for t in sorted(rel, key=structure.sort_key)]


def term(t) -> dict:
    return {"var": t.name} if isinstance(t, Var) else {"const": element(t.value)}


def equation(eq) -> dict:
    if isinstance(eq, Atom):
        return {"kind": "atom", "symbol": eq.symbol.name, "args": [term(a) for a in eq.args]}
    return {"kind": "equality", "args": [term(eq.lhs), term(eq.rhs)]}


def structure_json(s: Structure) -> dict:
    return {
        "name": s.name,
        "universe": tup(s.universe),
        "relations": [
            {"symbol": sym.name, "arity": sym.arity, "tuples": relation(s, s.relation(sym.name))} for sym in s.symbols
        ],
    }


def system_json(system: EquationSystem) -> dict:
    return {
        "name": system.name,
        "variables": list(system.variables),
        "equations": [equation(eq) for eq in system.equations],
    }


def algebraic_set_json(structure: Structure, aset: AlgebraicSet) -> dict:
    return {
        "variables": list(aset.variables),
        "count": len(aset),
        "points": relation(structure, aset.points),
    }


def spec_json(spec: DerivedPredicateSpec) -> dict:
    return {
        "name": spec.name,
        "source": spec.source,
        "permutation": None if spec.permutation is None else list(spec.permutation),
        "fixings": [[p, element(e)] for p, e in spec.fixings],
        "partition": None if spec.partition is None else [list(b) for b in spec.partition.blocks],
    }


def witness_json(w: Witness | None) -> dict | None:
    if w is None:
        return None
    if isinstance(w, StaircaseWitness):
        return {
            "kind": "staircase",
            "symbol": w.symbol,
            "p": w.p,
            "t": w.t,
            "depth": w.depth,
            "rows": [{"a": tup(a), "b": tup(b)} for a, b in w.rows],
        }
    assert isinstance(w, CliqueWitness)
    return {"kind": "clique", "symbol": w.symbol, "depth": w.depth, "elements": tup(w.elements)}


def kotov_json(k: KotovSequence) -> dict:
    return {
        "variables": list(k.variables),
        "equations": [equation(eq) for eq in k.equations],
        "points": [tup(p) for p in k.points],
    }


def refinement_json(rs: RefinedSequence) -> dict:
    verdicts = [{"singleton": element(v.value)} if isinstance(v, Singleton) else "all-distinct" for v in rs.verdicts]
    return {"indices": list(rs.indices), "verdicts": verdicts, "columns": [list(b) for b in rs.columns.blocks]}


def criterion_json(report: CriterionReport) -> dict:
    caps = report.caps
    return {
        "depth": report.depth,
        "caps": {
            "max_fixed": caps.max_fixed,
            "max_fixings": caps.max_fixings,
            "extra_pool": tup(caps.extra_pool),
        },
        "exhaustive": report.exhaustive,
        "searched": report.searched,
        "symbols": list(report.symbols),
        "findings": [
            {"kind": f.kind, "spec": spec_json(f.spec), "witness": witness_json(f.witness)} for f in report.findings
        ],
    }


def growth_json(g: GrowthReport) -> dict:
    return {"direction": g.direction, "sizes": list(g.sizes), "counts": list(g.counts), "stabilized": g.stabilized}


def construction_json(c: ConeConstruction) -> dict:
    return {
        "direction": c.direction,
        "pairs": [tup(p) for p in c.pairs],
        "witness": witness_json(c.witness),
        "exhausted": c.exhausted,
        "reason": c.reason,
    }


def evidence_json(ev: ConeEvidence) -> dict:
    return {
        "direction": ev.direction,
        "B": tup(ev.B),
        "evidence": [{"subset": tup(C), "element": element(x)} for C, x in ev.evidence],
    }


def poset_json(report: PosetReport) -> dict:
    return {
        "strict": report.strict,
        "depth": report.depth,
        "staircases": {k: witness_json(v) for k, v in report.staircases.items()},
        "cliques": {k: witness_json(v) for k, v in report.cliques.items()},
        "growth": {k: growth_json(v) for k, v in report.growth.items()},
        "constructions": {k: construction_json(v) for k, v in report.constructions.items()},
        "fired": report.fired(),
        "checks": [{"name": n, "ok": ok} for n, ok in report.checks],
        "consistent": report.consistent,
    }


def envelope(command: str, inputs: dict, result: Any) -> dict:
    return {"schema": SCHEMA_VERSION, "command": command, "input": inputs, "result": result}


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
