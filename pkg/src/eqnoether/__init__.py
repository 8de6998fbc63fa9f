"""Equational Noetherianity toolkit for finite predicate structures."""

from __future__ import annotations

from .builtins import BUILTINS, base_graph, builtin, builtin_stream, clique_graph, int_stream, int_structure
from .model import (
    CONST,
    EQUALITY,
    AlgebraicSet,
    Atom,
    Configuration,
    Const,
    Equality,
    EquationSystem,
    ModelError,
    PredicateSymbol,
    Structure,
    Var,
    check_kotov_prefix,
    classify_by_shape,
    configuration_bound,
    configuration_of,
    group_by_configuration,
    minimize_system,
    same_configuration,
    solve_system,
    systems_equivalent,
)
from .posets import (
    ConeConstruction,
    ConeEvidence,
    GrowthReport,
    OrderAxiomError,
    Poset,
    PosetReport,
    StreamedPoset,
    analyze_poset,
    cone,
    cone_to_witness,
    generator_growth,
    incremental_generators,
    lower_cone,
    minimal_generators,
    upper_cone,
    witness_to_cone,
)
from .predicates import (
    DerivedPredicateSpec,
    Partition,
    ProjectionSpec,
    all_partitions,
    derive_structure,
    glue_predicate,
    project_predicate,
    reorder_predicate,
)
from .textio import ParseError, format_structure, format_system, parse_structure, parse_system
from .witness import (
    ALL_DISTINCT,
    CliqueWitness,
    CriterionReport,
    KotovSequence,
    RefinedSequence,
    ScanCaps,
    Singleton,
    StaircaseWitness,
    WitnessError,
    criterion_scan,
    find_clique,
    find_staircase,
    graph_analyze,
    refine_tuples,
    refine_tuples_exact,
    refinement_is_valid,
    restore_witness,
    verify_clique,
    verify_staircase,
    witness_to_kotov,
)

__version__ = "0.1.0"
