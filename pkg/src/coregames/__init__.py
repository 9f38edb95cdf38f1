"""Exact core imputations for cooperative games built on LP duality."""

from .errors import ContractError, CoreGamesError, MalformedInputError, ResourceBoundError
from .games import (
    AgentImputation,
    AssignmentGame,
    AuditReport,
    CliqueGame,
    CoreReport,
    Game,
    MatroidGame,
    PackingGame,
    SatisfactionImputation,
    StableSetGame,
    allocate_top_down,
    build_lps,
    check_dual_optimality,
    equivalence_audit,
    satisfaction,
    solve_dual_core,
    tdi_witness,
    verify_core_membership,
    worth,
)
from .graphs import (
    Graph,
    WeightedGraph,
    chromatic_number,
    clique_number,
    complement,
    enumerate_maximal_cliques,
    find_odd_hole_or_antihole,
    is_perfect,
    max_weight_stable_set,
)
from .io import emit_imputation, emit_instance, parse_imputation, parse_instance
from .lp import LinearProgram, LPSolution, check_certificates, find_integral_dual, solve_lp
from .matroids import (
    ExplicitMatroid,
    GraphicMatroid,
    PartitionMatroid,
    UniformMatroid,
    WeightedMatroid,
    greedy_max_weight_independent,
    verify_rank_axioms,
)
from .rational import Rational, format_rational, parse_rational

__version__ = "0.1.0"
