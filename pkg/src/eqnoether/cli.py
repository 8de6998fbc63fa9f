"""Command-line interface.

Exit codes: 0 completed (including searches that find nothing), 1 usage or
input error, 2 internal invariant violation.  Output is assembled in full
before anything is printed, so a failing run prints no partial report.
"""

from __future__ import annotations

import argparse
import re
import sys
from typing import Sequence, TextIO

from . import report as rj
from .builtins import BUILTINS, SELECTORS, builtin, builtin_stream
from .model import (
    Element,
    EquationSystem,
    ModelError,
    Structure,
    classify_by_shape,
    group_by_configuration,
    minimize_system,
    solve_system,
    systems_equivalent,
)
from .posets import OrderAxiomError, Poset, StreamedPoset, analyze_poset
from .predicates import DerivedPredicateSpec, Partition, derive_structure
from .textio import ParseError, format_structure, format_system, parse_structure, parse_system
from .witness import (
    ScanCaps,
    WitnessError,
    criterion_scan,
    derived_structure_for,
    find_clique,
    find_staircase,
    restore_witness,
    verify_clique,
    verify_staircase,
)

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2
DERIVED_NAME = "Q"


class UsageError(Exception):
    pass


class InvariantError(Exception):
    """A self-check on a computed result failed."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


# -- argument helpers ----------------------------------------------------------


def _element(text: str) -> Element:
    return int(text) if re.fullmatch(r"-?\d+", text) else text


def _positions(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"expected comma-separated positions, got {text!r}") from None


def _fixings(items: Sequence[str] | None) -> tuple:
    out = []
    for item in items or ():
        for part in item.split(","):
            pos, sep, value = part.partition("=")
            if not sep or not pos.strip().isdigit() or not value:
                raise UsageError(f"expected POS=ELEMENT, got {part!r}")
            out.append((int(pos), _element(value.strip())))
    return tuple(out)


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


class _SourceError(Exception):
    def __init__(self, path: str, err: ParseError) -> None:
        super().__init__(f"{path}: {err}")


def _load_structure(args) -> Structure:
    if args.structure and args.builtin:
        raise UsageError("give either -s FILE or --builtin NAME, not both")
    if args.structure:
        try:
            return parse_structure(_read(args.structure))
        except ParseError as err:
            raise _SourceError(args.structure, err) from None
    if args.builtin:
        if args.size is None:
            raise UsageError("--builtin needs --size N")
        return builtin(args.builtin, args.size)
    raise UsageError("a structure is required: -s FILE or --builtin NAME --size N")


def _load_system(path: str, structure: Structure | None) -> EquationSystem:
    try:
        return parse_system(_read(path), structure)
    except ParseError as err:
        raise _SourceError(path, err) from None


def _structure_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("structure")
    g.add_argument("-s", "--structure", metavar="FILE", help="structure file")
    g.add_argument("--builtin", choices=BUILTINS, help="generated structure")
    g.add_argument("--size", type=int, help="size parameter for --builtin")


def _derive_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("-P", "--predicate", required=True, metavar="SYM")
    p.add_argument("--reorder", metavar="S1,..,Sn", help="permute positions first")
    p.add_argument("--fix", action="append", metavar="POS=ELEM", help="fix a position (repeatable)")
    p.add_argument("--partition", metavar="BLOCKS", help="glue kept positions, e.g. 1|2,3")


def _spec_from(args, partition_required: bool = False) -> DerivedPredicateSpec | None:
    perm = _positions(args.reorder) if args.reorder else None
    fix = _fixings(args.fix)
    part = args.partition
    if partition_required and not part:
        raise UsageError("--partition is required")
    if perm is None and not fix and not part:
        return None
    partition = Partition.parse(part) if part else None
    return DerivedPredicateSpec(args.predicate, DERIVED_NAME, permutation=perm, fixings=fix, partition=partition)


def _tuple_text(t: Sequence[Element]) -> str:
    return "(" + ",".join(map(str, t)) + ")"


def _set_text(structure: Structure, rel) -> str:
    return "{" + ",".join(_tuple_text(t) for t in sorted(rel, key=structure.sort_key)) + "}"


def _witness_lines(w) -> list[str]:
    if w is None:
        return []
    if hasattr(w, "rows"):
        return [f"  {i}: a={_tuple_text(a)} b={_tuple_text(b)}" for i, (a, b) in enumerate(w.rows, start=1)]
    return [f"  {i}: {e}" for i, e in enumerate(w.elements, start=1)]


# -- subcommands -------------------------------------------------------------------
# Each returns (text, json document).


def cmd_solve(args):
    s = _load_structure(args)
    system = _load_system(args.system, s)
    aset = solve_system(s, system)
    lines = [f"variables: {' '.join(aset.variables)}", f"solutions: {len(aset)}"]
    lines += [_tuple_text(p) for p in sorted(aset.points, key=s.sort_key)]
    return "\n".join(lines), rj.envelope(
        "solve", {"structure": s.name, "system": system.name}, rj.algebraic_set_json(s, aset)
    )


def cmd_equiv(args):
    s = _load_structure(args)
    s1, s2 = _load_system(args.left, s), _load_system(args.right, s)
    same = systems_equivalent(s, s1, s2)
    result = {
        "equivalent": same,
        "left": rj.algebraic_set_json(s, solve_system(s, s1)),
        "right": rj.algebraic_set_json(s, solve_system(s, s2)),
    }
    text = f"{s1.name} and {s2.name} are {'equivalent' if same else 'not equivalent'} over {s.name}"
    return text, rj.envelope("equiv", {"structure": s.name, "left": s1.name, "right": s2.name}, result)


def cmd_minimize(args):
    s = _load_structure(args)
    system = _load_system(args.system, s)
    kept = minimize_system(s, system, args.mode)
    sub = system.subsystem(kept)
    if not systems_equivalent(s, system, sub):
        raise InvariantError("minimized system is not equivalent to the input")
    text = f"kept {len(kept)} of {len(system)} equations ({args.mode})\n" + format_system(sub).rstrip("\n")
    result = {"mode": args.mode, "indices": list(kept), "system": rj.system_json(sub), "equivalent": True}
    return text, rj.envelope("minimize", {"structure": s.name, "system": system.name, "mode": args.mode}, result)


def cmd_classify(args):
    s = _load_structure(args) if (args.structure or args.builtin) else None
    system = _load_system(args.system, s)
    sc, sx, sxc = classify_by_shape(system)
    groups = group_by_configuration(system)
    lines = []
    for label, idx in (("S_C", sc), ("S_X", sx), ("S_XC", sxc)):
        lines.append(f"{label}: " + ("; ".join(str(system.equations[i]) for i in idx) or "-"))
    lines.append(f"configurations: {len(groups)}")
    lines += [f"  {cfg}: {len(idx)} equation(s)" for cfg, idx in groups.items()]
    result = {
        "S_C": list(sc),
        "S_X": list(sx),
        "S_XC": list(sxc),
        "configurations": [{"configuration": str(cfg), "equations": list(idx)} for cfg, idx in groups.items()],
    }
    return "\n".join(lines), rj.envelope("classify", {"system": system.name}, result)


def _derived_relation(args, command: str):
    s = _load_structure(args)
    spec = _spec_from(args, partition_required=command == "glue")
    if spec is None:
        raise UsageError("project needs at least one --fix")
    sym = s.symbol(args.predicate)
    n, k, m = spec.arities(sym.arity)
    if command == "project":
        if not spec.fixings:
            raise UsageError("project needs at least one --fix")
        if getattr(args, "keep", None):
            kept = _positions(args.keep)
            expected = tuple(i for i in range(1, n + 1) if i not in dict(spec.fixings))
            if tuple(sorted(kept)) != expected:
                raise UsageError(f"--keep {args.keep} does not match the complement of the fixed positions")
    rel = spec.relation(s)
    result = {"spec": rj.spec_json(spec), "arity": m, "tuples": rj.relation(s, rel)}
    inputs = {"structure": s.name, "predicate": args.predicate}
    return _set_text(s, rel), rj.envelope(command, inputs, result)


def cmd_project(args):
    return _derived_relation(args, "project")


def cmd_glue(args):
    return _derived_relation(args, "glue")


def _search(args, kind: str):
    s = _load_structure(args)
    spec = _spec_from(args)
    target = derive_structure(s, [spec]) if spec else s
    symbol = spec.name if spec else args.predicate
    if kind == "staircase":
        w = find_staircase(target, symbol, args.p, args.t, args.depth)
        ok = w is None or verify_staircase(target, w)
    else:
        w = find_clique(target, symbol, args.depth)
        ok = w is None or verify_clique(target, w)
    if not ok:
        raise InvariantError(f"{kind} returned by the search does not verify")
    restored = None
    if w is not None and spec is not None:
        restored = restore_witness(s, w, spec)
        if not restored.holds(s):
            raise InvariantError("restored equations violate the Kotov condition")
    head = f"{kind} of depth {args.depth} over {symbol}" + (f" ({spec.describe()})" if spec else "")
    lines = [("found " if w else "no ") + head] + _witness_lines(w)
    if restored is not None:
        lines.append(f"restored equations over {args.predicate}:")
        lines += [f"  {eq}  fails at {_tuple_text(pt)}" for eq, pt in zip(restored.equations, restored.points)]
    result = {
        "found": w is not None,
        "witness": rj.witness_json(w),
        "spec": rj.spec_json(spec) if spec else None,
        "restored": rj.kotov_json(restored) if restored else None,
    }
    inputs = {"structure": s.name, "predicate": args.predicate, "depth": args.depth}
    if kind == "staircase":
        inputs.update(p=args.p, t=args.t)
    return "\n".join(lines), rj.envelope(kind, inputs, result)


def cmd_staircase(args):
    return _search(args, "staircase")


def cmd_clique(args):
    return _search(args, "clique")


def cmd_criterion(args):
    s = _load_structure(args)
    extra = tuple(_element(x) for x in args.extra_pool.split(",")) if args.extra_pool else ()
    caps = ScanCaps(args.max_fixed, args.max_fixings, extra)
    rep = criterion_scan(s, args.depth, caps)
    for f in rep.findings:
        derived = derived_structure_for(s, f)
        w = f.witness
        if not (verify_staircase(derived, w) if f.kind == "staircase" else verify_clique(derived, w)):
            raise InvariantError(f"finding on {f.spec.name} does not verify")
    lines = [
        f"criterion scan of {s.name} at depth {args.depth}: {len(rep.findings)} finding(s), "
        f"{rep.searched} searches, exhaustive={'yes' if rep.exhaustive else 'no'}"
    ]
    for f in rep.findings:
        lines.append(f"{f.kind} on {f.spec.name}")
        lines += _witness_lines(f.witness)
    return "\n".join(lines), rj.envelope("criterion", {"structure": s.name, "depth": args.depth}, rj.criterion_json(rep))


def cmd_poset(args):
    if args.builtin and args.structure:
        raise UsageError("give either -s FILE or --builtin NAME, not both")
    if args.builtin:
        source = builtin_stream(args.builtin, args.budget)
        name = source.name
    elif args.structure:
        if not args.predicate:
            raise UsageError("-s FILE needs -P SYM naming the order")
        s = _load_structure(args)
        poset = Poset(s, args.predicate, not args.nonstrict)
        source = StreamedPoset.from_poset(poset, min(args.budget, len(s.universe)))
        name = s.name
    else:
        raise UsageError("a structure is required: -s FILE -P SYM or --builtin int-strict|int-nonstrict")
    rep = analyze_poset(source, args.depth, select=SELECTORS[args.select])
    if not rep.consistent:
        bad = [n for n, ok in rep.checks if not ok]
        raise InvariantError("poset cross-checks failed: " + ", ".join(bad))
    lines = [f"poset {name} ({'strict' if rep.strict else 'nonstrict'}), depth {args.depth}, budget {source.budget}"]
    for key, fired in rep.fired().items():
        lines.append(f"  {key}: {'fires' if fired else 'silent'}")
    for direction, g in rep.growth.items():
        lines.append(f"  growth-{direction} counts: {' '.join(map(str, g.counts))}")
    for direction, c in rep.constructions.items():
        lines.append(f"  construction-{direction}:")
        lines += ["  " + x for x in _witness_lines(c.witness)] or [f"    none: {c.reason}"]
    lines.append(f"checks: {len(rep.checks)} passed")
    inputs = {"structure": name, "depth": args.depth, "budget": source.budget, "select": args.select}
    return "\n".join(lines), rj.envelope("poset", inputs, rj.poset_json(rep))


def cmd_gen(args):
    s = builtin(args.name, args.size)
    return format_structure(s).rstrip("\n"), rj.envelope("gen", {"name": args.name, "size": args.size}, rj.structure_json(s))


# -- parser --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a JSON report")
    parser = _Parser(prog="eqnoether", description="Equational Noetherianity toolkit for finite predicate structures.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text, structure=True):
        p = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        if structure:
            _structure_args(p)
        p.set_defaults(func=func)
        return p

    add("solve", cmd_solve, "Solve a system by enumeration.").add_argument("system", metavar="SYSTEM")
    p = add("equiv", cmd_equiv, "Compare the solution sets of two systems.")
    p.add_argument("left", metavar="SYSTEM1")
    p.add_argument("right", metavar="SYSTEM2")
    p = add("minimize", cmd_minimize, "Find a small equivalent subsystem.")
    p.add_argument("system", metavar="SYSTEM")
    p.add_argument("--mode", choices=("exact", "greedy"), default="exact")
    p = add("classify", cmd_classify, "Split a system by equation shape and configuration.")
    p.add_argument("system", metavar="SYSTEM")
    p = add("project", cmd_project, "Fix positions of a predicate.")
    _derive_args(p)
    p.add_argument("--keep", metavar="I1,I2", help="kept positions (checked against --fix)")
    p = add("glue", cmd_glue, "Identify positions of a predicate by a partition.")
    _derive_args(p)
    p = add("staircase", cmd_staircase, "Search a (p,t)-staircase witness.")
    _derive_args(p)
    p.add_argument("-p", type=int, default=1)
    p.add_argument("-t", type=int, default=1)
    p.add_argument("-d", "--depth", type=int, required=True)
    p = add("clique", cmd_clique, "Search a clique witness of a binary predicate.")
    _derive_args(p)
    p.add_argument("-d", "--depth", type=int, required=True)
    p = add("criterion", cmd_criterion, "Scan all projections and gluings for witnesses.")
    p.add_argument("-d", "--depth", type=int, required=True)
    p.add_argument("--max-fixed", type=int)
    p.add_argument("--max-fixings", type=int)
    p.add_argument("--extra-pool", metavar="E1,E2", help="extra fixing candidates")
    p = add("poset", cmd_poset, "Run cone, growth and witness detectors on an order.", structure=False)
    p.add_argument("-s", "--structure", metavar="FILE")
    p.add_argument("-P", "--predicate", metavar="SYM")
    p.add_argument("--nonstrict", action="store_true", help="the relation is reflexive")
    p.add_argument("--builtin", choices=("int-strict", "int-nonstrict"))
    p.add_argument("--budget", type=int, default=100)
    p.add_argument("--select", choices=sorted(SELECTORS), default="all")
    p.add_argument("-d", "--depth", type=int, required=True)
    p.set_defaults(size=None)
    p = add("gen", cmd_gen, "Print a generated structure.", structure=False)
    p.add_argument("name", choices=BUILTINS)
    p.add_argument("--size", type=int, required=True)
    return parser


def run_cli(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        text, doc = args.func(args)
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_INPUT
    except (UsageError, _SourceError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INPUT
    except InvariantError as exc:
        print(f"internal error: {exc}", file=err)
        return EXIT_INTERNAL
    except (ModelError, WitnessError, OrderAxiomError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INPUT
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=err)
        return EXIT_INTERNAL
    out.write(rj.dumps(doc) if args.json else text + "\n")
    return EXIT_OK


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
