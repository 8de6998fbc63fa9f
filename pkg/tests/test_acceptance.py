"""Acceptance criteria; each test prints one PASS/FAIL line with its timing."""

from __future__ import annotations

import itertools
import random
import time

from conftest import ACCEPTANCE_LINES, DATA, GOLDEN
from eqnoether import (
    Atom,
    CliqueWitness,
    Const,
    DerivedPredicateSpec,
    Equality,
    EquationSystem,
    ParseError,
    Partition,
    Poset,
    ProjectionSpec,
    StaircaseWitness,
    Structure,
    Var,
    all_partitions,
    analyze_poset,
    base_graph,
    cone_to_witness,
    criterion_scan,
    derive_structure,
    find_clique,
    find_staircase,
    format_structure,
    format_system,
    generator_growth,
    glue_predicate,
    int_stream,
    int_structure,
    minimize_system,
    parse_structure,
    parse_system,
    project_predicate,
    refine_tuples,
    refine_tuples_exact,
    refinement_is_valid,
    restore_witness,
    systems_equivalent,
    verify_clique,
    verify_staircase,
    witness_to_cone,
)
from eqnoether.builtins import SELECTORS
from eqnoether.witness import derived_structure_for
from oracles import clique_exists, max_refinement, minimum_equivalent_size, plain_equation, refinement_ok, staircase_exists


def record(name: str, ok: bool, elapsed: float, limit: float | None, detail: str = "") -> None:
    in_time = limit is None or elapsed < limit
    passed = ok and in_time
    bound = f" (limit {limit:g}s)" if limit is not None else ""
    line = f"{'PASS' if passed else 'FAIL'} {name}: {elapsed:.6f}s{bound}" + (f" - {detail}" if detail else "")
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert passed, line


def test_projection_golden(gamma):
    project_predicate(gamma, ProjectionSpec("E", {2: "v4"}))
    t = time.perf_counter()
    rel = project_predicate(gamma, ProjectionSpec("E", {2: "v4"}))
    elapsed = time.perf_counter() - t
    record("projection golden", rel == {("v2", "v1"), ("v5", "v5")}, elapsed, 0.001, str(sorted(rel)))


def test_gluing_golden(gamma):
    t = time.perf_counter()
    rel = glue_predicate(gamma, "E", Partition(((1,), (2, 3))))
    elapsed = time.perf_counter() - t
    record("gluing golden", rel == {("v1", "v3"), ("v3", "v2")}, elapsed, None, str(sorted(rel)))


def test_integer_example():
    t = time.perf_counter()
    problems = []
    for d in range(1, 9):
        z = int_structure(2 * d + 2)
        rep = criterion_scan(z, d)
        cliques = [f for f in rep.findings if f.kind == "clique"]
        stairs = [f for f in rep.findings if f.kind == "staircase" and (f.witness.p, f.witness.t) == (1, 1)]
        ok = bool(cliques) and bool(stairs)
        ok = ok and all(verify_clique(derived_structure_for(z, f), f.witness) for f in cliques)
        ok = ok and all(verify_staircase(derived_structure_for(z, f), f.witness) for f in stairs)
        if ok:
            rows = [((-2 * i,), (-2 * i - 1,)) for i in range(1, d + 1)]
            even_odd = StaircaseWitness(stairs[0].spec.name, 1, 1, rows)
            ok = verify_staircase(derived_structure_for(z, stairs[0]), even_odd)
        if not ok:
            problems.append(d)
    elapsed = time.perf_counter() - t
    detail = "clique and (1,1)-staircase found; a_i=-2i, b_i=-2i-1 verifies for d=1..8" if not problems else f"failed at d={problems}"
    record("integer example", not problems, elapsed, 10.0, detail)


def test_base_graph():
    t = time.perf_counter()
    failures, deepest = [], 0
    for d in range(1, 11):
        g = base_graph(d)
        if find_staircase(g, "E", 1, 1, d) is None:
            failures.append(f"no staircase at d={d}")
        for dp in range(2, 2 * d + 1):
            c = find_clique(g, "E", dp)
            if c is not None:
                failures.append(f"d={d}: clique {c.elements} of depth {dp}")
                deepest = max(deepest, dp)
    elapsed = time.perf_counter() - t
    detail = "staircases found for d=1..10"
    if failures:
        detail += f"; {len(failures)} clique violations, first: {failures[0]}; deepest clique found: {deepest}"
    record("base graph", not failures, elapsed, 5.0, detail)


def test_oracle_equivalence():
    rng = random.Random(20261016)
    t = time.perf_counter()
    mismatches = 0
    for _ in range(200):
        n = rng.randint(1, 8)
        density = rng.uniform(0.3, 0.7)
        universe = [f"e{i}" for i in range(n)]
        rel = {(x, y) for x in universe for y in universe if rng.random() < density}
        s = Structure.build("rand", universe, {"E": (2, rel)})
        for d in (2, 3, 4):
            mismatches += (find_staircase(s, "E", 1, 1, d) is not None) != staircase_exists(universe, rel, 1, 1, d)
            mismatches += (find_clique(s, "E", d) is not None) != clique_exists(universe, rel, d)
    elapsed = time.perf_counter() - t
    record("oracle equivalence", mismatches == 0, elapsed, 60.0, f"{mismatches} mismatches over 1200 queries")


def _random_system(rng: random.Random, s: Structure) -> EquationSystem:
    variables = ("x", "y")[: rng.randint(1, 2)]
    sym = s.symbols[0]

    def term():
        return Var(rng.choice(variables)) if rng.random() < 0.6 else Const(rng.choice(s.universe))

    eqs = []
    for _ in range(rng.randint(0, 6)):
        if rng.random() < 0.7:
            eqs.append(Atom(sym, tuple(term() for _ in range(sym.arity))))
        else:
            eqs.append(Equality(term(), term()))
    return EquationSystem(variables, tuple(eqs))


def test_minimization():
    rng = random.Random(7)
    t = time.perf_counter()
    bad = 0
    for _ in range(100):
        n, arity = rng.randint(1, 4), rng.randint(1, 3)
        universe = list(range(n))
        tuples = [tup for tup in itertools.product(universe, repeat=arity) if rng.random() < 0.5]
        s = Structure.build("rand", universe, {"P": (arity, tuples)})
        system = _random_system(rng, s)
        exact = system.subsystem(minimize_system(s, system, "exact"))
        greedy = system.subsystem(minimize_system(s, system, "greedy"))
        plain = [plain_equation(e) for e in system.equations]
        best = minimum_equivalent_size(universe, {"P": s.relation("P")}, system.variables, plain)
        ok = systems_equivalent(s, system, exact) and len(exact) == best
        ok = ok and systems_equivalent(s, system, greedy)
        ok = ok and all(
            not systems_equivalent(s, system, greedy.subsystem([j for j in range(len(greedy)) if j != i]))
            for i in range(len(greedy))
        )
        bad += not ok
    elapsed = time.perf_counter() - t
    record("minimization", bad == 0, elapsed, 30.0, f"{bad} bad instances of 100")


def test_refinement():
    rng = random.Random(11)
    t = time.perf_counter()
    bad = 0
    for _ in range(500):
        n, size = rng.randint(1, 4), rng.randint(1, 10)
        D = [tuple(rng.randint(0, 4) for _ in range(n)) for _ in range(size)]
        rs, ex = refine_tuples(D), refine_tuples_exact(D)
        bad += not (refinement_is_valid(D, rs) and refinement_ok(D, rs.indices) and len(ex) >= len(rs))
        bad += len(ex) != max_refinement(D)
    families = 0
    for size in range(1, 11):
        for n in range(1, 5):
            same = [tuple(range(n))] * size
            distinct = [tuple(100 * j + i for j in range(n)) for i in range(size)]
            for D in (same, distinct):
                families += 1
                bad += not (len(refine_tuples(D)) == len(refine_tuples_exact(D)) == size)
    elapsed = time.perf_counter() - t
    record("refinement", bad == 0, elapsed, 30.0, f"{bad} bad of 500 random + {families} family sequences")


def _planted(rng: random.Random):
    n = rng.randint(2, 4)
    universe = list(range(14))
    fixed = rng.sample(range(1, n + 1), rng.randint(0, n - 2))
    fixings = {pos: rng.choice(universe) for pos in fixed}
    partition = rng.choice([q for q in all_partitions(n - len(fixed)) if len(q) >= 2])
    perm = tuple(rng.sample(range(1, n + 1), n))
    spec = DerivedPredicateSpec("P", "Q", permutation=perm, fixings=fixings, partition=partition)
    m, d = len(partition), rng.randint(1, 3)
    pool = [e for e in universe if e not in fixings.values()]
    if m == 2 and rng.random() < 0.5:
        elems = rng.sample(pool, d)
        w = CliqueWitness("Q", elems)
        good = [(elems[i], elems[j]) for i in range(d) for j in range(i)]
        bad = [(e, e) for e in elems]
    else:
        p = rng.randint(1, m - 1)
        elems = rng.sample(pool, d * m)
        rows = [(tuple(elems[i * m : i * m + p]), tuple(elems[i * m + p : (i + 1) * m])) for i in range(d)]
        w = StaircaseWitness("Q", p, m - p, rows)
        good = [rows[i][0] + rows[j][1] for i in range(d) for j in range(i)]
        bad = [a + b for a, b in rows]
    rel = {tuple(rng.choice(universe) for _ in range(n)) for _ in range(rng.randint(0, 15))}
    rel |= {spec.expand(args, n) for args in good}
    rel -= {spec.expand(args, n) for args in bad}
    return Structure.build("planted", universe, {"P": (n, rel)}), spec, w


def test_restoration_round_trip():
    rng = random.Random(5)
    t = time.perf_counter()
    bad = 0
    for _ in range(100):
        s, spec, w = _planted(rng)
        derived = derive_structure(s, [spec])
        planted_ok = verify_clique(derived, w) if isinstance(w, CliqueWitness) else verify_staircase(derived, w)
        bad += not (planted_ok and restore_witness(s, w, spec).holds(s))
    elapsed = time.perf_counter() - t
    record("restoration round-trip", bad == 0, elapsed, 30.0, f"{bad} failures of 100")


def test_poset_equivalences():
    t = time.perf_counter()
    notes = []
    stream = int_stream(True, 100)
    built = cone_to_witness(stream, SELECTORS["odd-negatives"], 6, "down")
    w = built.witness
    poset = stream.full()
    z_ok = w is not None and w.depth == 6 and verify_staircase(poset.oriented, w)
    if z_ok:
        ev = witness_to_cone(stream, w)
        z_ok = ev.is_valid(stream) and len(ev.evidence) == 2**5 - 1
    growth = generator_growth(stream, direction="down")
    z_ok = z_ok and not growth.stabilized
    notes.append("int-strict ok" if z_ok else "int-strict FAILED")

    lattice = Poset(parse_structure((DATA / "boolean4.str").read_text()), "SUB", strict=False)
    fired_at = []
    stable = True
    for d in range(2, 17):
        rep = analyze_poset(lattice, d)
        stable = stable and all(g.stabilized for g in rep.growth.values())
        if any(rep.fired().values()):
            fired_at.append(d)
    lattice_ok = not fired_at and stable
    if fired_at:
        notes.append(f"boolean lattice: detectors fire at d={fired_at} (staircase in SUB, max depth 4)")
    else:
        notes.append("boolean lattice silent")
    notes.append("lattice growth stabilizes" if stable else "lattice growth does not stabilize")
    elapsed = time.perf_counter() - t
    record("poset equivalences", z_ok and lattice_ok, elapsed, 10.0, "; ".join(notes))


def test_parser():
    from test_cli import GOLDEN_RUNS, run

    t = time.perf_counter()
    problems = []
    gamma = parse_structure((DATA / "gamma.str").read_text())
    for path in sorted(DATA.glob("*.str")):
        if format_structure(parse_structure(path.read_text())) != path.read_text():
            problems.append(path.name)
    for path in sorted(DATA.glob("*.sys")):
        if format_system(parse_system(path.read_text(), gamma)) != path.read_text():
            problems.append(path.name)
    for name, argv in GOLDEN_RUNS.items():
        if run(argv)[1] != (GOLDEN / name).read_text():
            problems.append(name)
    malformed = {
        "structure s\nelements a b\npredicate R 2\n(a, b)\n(a)\nend\n": 5,
        "structure s\nelements a\n\n\nelements a\nend\n": 5,
        "structure s\nelements a\npredicate R 1\n(zz)\nend\n": 4,
        "structure s\n  elements a %\nend\n": 2,
    }
    for text, line in malformed.items():
        try:
            parse_structure(text)
            problems.append(f"accepted: {text!r}")
        except ParseError as e:
            if e.line != line:
                problems.append(f"line {e.line} != {line}")
    import tempfile
    from pathlib import Path

    with tempfile.TemporaryDirectory() as tmp:
        bad = Path(tmp) / "bad.str"
        bad.write_text(next(iter(malformed)))
        code, out, _ = run(["solve", "-s", str(bad), str(DATA / "gamma_fix_middle.sys")])
        if code != 1 or out:
            problems.append(f"malformed file exit {code}")
    elapsed = time.perf_counter() - t
    files = len(list(DATA.glob("*.str"))) + len(list(DATA.glob("*.sys")))
    record("parser", not problems, elapsed, None, f"{files} files, {len(GOLDEN_RUNS)} goldens" + (f"; {problems}" if problems else ""))
