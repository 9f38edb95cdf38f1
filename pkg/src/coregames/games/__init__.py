"""Cooperative games whose cores are the optimal duals of their LP relaxations."""

from .allocation import Allocation, AgentImputation, SatisfactionImputation, allocate_top_down, satisfaction
from .core import (
    AuditReport,
    AuditSample,
    CoreReport,
    CoreViolation,
    DualCheck,
    allocated,
    check_dual_optimality,
    equivalence_audit,
    solve_dual_core,
    tdi_witness,
    verify_core_membership,
    witness_imputation,
)
from .instances import (
    AGENT,
    SATISFACTION,
    AgentGame,
    AssignmentGame,
    CliqueGame,
    Game,
    GameLPs,
    Hypothesis,
    MatroidGame,
    PackingGame,
    SatisfactionGame,
    StableSetGame,
    coalitions,
)


def worth(game: Game, T=None):
    """Worth of coalition ``T`` (default: the grand coalition)."""
    return game.worth(T)


def build_lps(game: Game) -> GameLPs:
    return game.lps


__all__ = [
    "AGENT",
    "SATISFACTION",
    "AgentGame",
    "AgentImputation",
    "Allocation",
    "AssignmentGame",
    "AuditReport",
    "AuditSample",
    "CliqueGame",
    "CoreReport",
    "CoreViolation",
    "DualCheck",
    "Game",
    "GameLPs",
    "Hypothesis",
    "MatroidGame",
    "PackingGame",
    "SatisfactionGame",
    "SatisfactionImputation",
    "StableSetGame",
    "allocate_top_down",
    "allocated",
    "build_lps",
    "check_dual_optimality",
    "coalitions",
    "equivalence_audit",
    "satisfaction",
    "solve_dual_core",
    "tdi_witness",
    "verify_core_membership",
    "witness_imputation",
    "worth",
]
