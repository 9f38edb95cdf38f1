"""Command-line front end.

Exit codes: 0 success, 1 a check came out negative (imputation outside the
core, audit disagreement, no integral witness, graph imperfect in a way the
odd-hole test does not explain, matroid axiom violated), 2 bad input,
3 a size bound was exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from .errors import CoreGamesError, ResourceBoundError
from .games import (
    CliqueGame,
    Game,
    MatroidGame,
    StableSetGame,
    check_dual_optimality,
    equivalence_audit,
    solve_dual_core,
    tdi_witness,
    verify_core_membership,
    witness_imputation,
)
from .graphs import DEFAULT_BOUND as PERFECTION_BOUND, find_odd_hole_or_antihole, is_perfect
from .io import (
    emit_imputation,
    load_document,
    parse_graph,
    parse_imputation,
    parse_instance,
    parse_matroid,
    to_jsonable,
)
from .lp import OPTIMAL, check_certificates
from .matroids import DEFAULT_BOUND as MATROID_BOUND, greedy_max_weight_independent, verify_rank_axioms
from .rational import format_rational

COMMANDS = ("solve", "verify-core", "audit", "check-perfect", "check-matroid", "tdi-witness")

EXIT_OK, EXIT_CHECK_FAILED, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3


@dataclass(frozen=True)
class RunConfig:
    command: str
    input_path: str
    imputation_path: str | None = None
    output_format: str = "json"
    size_bound: int | None = None
    trials: int = 50
    seed: int = 0
    timing: bool = True

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.output_format not in ("json", "text"):
            raise ValueError(f"unknown format {self.output_format!r}")
        if self.size_bound is not None and self.size_bound < 1:
            raise ValueError("size bound must be at least 1")
        if self.trials < 0:
            raise ValueError("trials must be nonnegative")

    def bound(self, default: int) -> int:
        return default if self.size_bound is None else self.size_bound


@dataclass(frozen=True)
class Report:
    """Everything a run produced, already in JSON-ready form."""

    command: str
    instance: dict
    result: dict
    timing_ms: float | None = None
    messages: tuple[str, ...] = field(default=())

    def to_dict(self) -> dict:
        out = {"command": self.command, "instance": self.instance, "result": self.result}
        if self.timing_ms is not None:
            out["timing_ms"] = self.timing_ms
        if self.messages:
            out["messages"] = list(self.messages)
        return out

    @classmethod
    def from_dict(cls, doc: dict) -> Report:
        return cls(doc["command"], doc["instance"], doc["result"], doc.get("timing_ms"), tuple(doc.get("messages", ())))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_text(self) -> str:
        lines = [f"command: {self.command}"]
        _render(lines, "instance", self.instance, 0)
        _render(lines, "result", self.result, 0)
        for m in self.messages:
            lines.append(f"note: {m}")
        if self.timing_ms is not None:
            lines.append(f"timing_ms: {self.timing_ms}")
        return "\n".join(lines)


def _render(lines: list[str], key: str, value, depth: int) -> None:
    pad = "  " * depth
    if isinstance(value, dict):
        if not value:
            lines.append(f"{pad}{key}: {{}}")
            return
        lines.append(f"{pad}{key}:")
        for k in sorted(value):
            _render(lines, k, value[k], depth + 1)
    elif isinstance(value, list) and any(isinstance(v, (dict, list)) for v in value):
        lines.append(f"{pad}{key}:")
        for i, v in enumerate(value):
            _render(lines, f"[{i}]", v, depth + 1)
    else:
        lines.append(f"{pad}{key}: {json.dumps(value)}")


def _summary(game: Game) -> dict:
    return {"game": game.kind, "agents": game.n_agents, "imputation_type": game.imputation_type}


def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise CoreGamesError(f"cannot read {path}: {exc.strerror}") from None


# -- commands ------------------------------------------------------------------


def _solve(config: RunConfig):
    game = parse_instance(_read(config.input_path), config.bound(MATROID_BOUND))
    sol = game.primal_solution
    result = {"status": sol.status}
    if sol.status != OPTIMAL:
        return _summary(game), result, EXIT_CHECK_FAILED, [f"primal relaxation is {sol.status}"]
    imp = solve_dual_core(game)
    certs = check_certificates(game.lps.primal, sol)
    result.update(
        value=sol.value,
        worth=game.worth(),
        primal=list(sol.primal),
        imputation=emit_imputation(imp),
        certificates_ok=certs.ok,
    )
    return _summary(game), result, EXIT_OK, []


def _verify_core(config: RunConfig):
    if config.imputation_path is None:
        raise CoreGamesError("verify-core needs --imputation")
    game = parse_instance(_read(config.input_path), config.bound(MATROID_BOUND))
    imp = parse_imputation(_read(config.imputation_path))
    report = verify_core_membership(game, imp, config.bound(MATROID_BOUND))
    dual = check_dual_optimality(game, imp)
    result = to_jsonable(report)
    result["total_matches"] = report.total_matches
    result["dual_feasible"] = dual.feasible
    result["dual_objective"] = dual.objective
    result["dual_optimal"] = dual.optimal
    messages = [] if report.in_core else [f"{len(report.violations)} coalition(s) get less than their worth" if report.violations
                                         else "the imputation does not distribute exactly the worth of the grand coalition"]
    return _summary(game), result, EXIT_OK if report.in_core else EXIT_CHECK_FAILED, messages


def _audit(config: RunConfig):
    game = parse_instance(_read(config.input_path), config.bound(MATROID_BOUND))
    report = equivalence_audit(game, config.trials, config.seed, config.bound(MATROID_BOUND))
    result = to_jsonable(report)
    result["consistent"] = report.consistent
    messages = []
    if report.hypothesis_holds is False:
        messages.append(f"hypothesis {report.hypothesis} fails on this instance; disagreements are expected")
    return _summary(game), result, EXIT_OK if report.consistent else EXIT_CHECK_FAILED, messages


def _graph_of(doc: dict):
    if "game" in doc:
        game = parse_instance(doc)
        if not isinstance(game, (StableSetGame, CliqueGame)):
            raise CoreGamesError(f"check-perfect needs a graph, not a {game.kind} game")
        return game.wgraph.graph, _summary(game)
    graph, _ = parse_graph(doc)
    return graph, {"graph": True, "vertices": graph.n, "edges": len(graph.edges)}


def _check_perfect(config: RunConfig):
    graph, summary = _graph_of(load_document(_read(config.input_path)))
    bound = config.bound(PERFECTION_BOUND)
    report = is_perfect(graph, bound)
    hole = find_odd_hole_or_antihole(graph, bound)
    result = to_jsonable(report)
    result["odd_hole"] = None if hole is None else {"kind": hole.kind, "cycle": list(hole.cycle)}
    agree = report.is_perfect == (hole is None)
    result["cross_check_agrees"] = agree
    messages = [] if agree else ["perfection disagrees with absence of odd holes and antiholes"]
    return summary, result, EXIT_OK if agree else EXIT_CHECK_FAILED, messages


def _check_matroid(config: RunConfig):
    doc = load_document(_read(config.input_path))
    weights = None
    if "game" in doc:
        if doc["game"] != "matroid":
            raise CoreGamesError(f"check-matroid needs a matroid, not a {doc['game']} game")
        weights = doc.get("weights")
        doc = doc.get("matroid")
    m = parse_matroid(doc)
    bound = config.bound(MATROID_BOUND)
    report = verify_rank_axioms(m, bound)
    result = to_jsonable(report)
    if report.ok and weights is not None:
        game = parse_instance({"game": "matroid", "matroid": doc, "weights": weights}, bound)
        chosen, weight = greedy_max_weight_independent(game.wmatroid, bound=bound)
        result["greedy"] = {"independent": sorted(chosen), "weight": format_rational(weight)}
    summary = {"matroid": m.kind, "elements": m.ground_size}
    messages = [] if report.ok else [f"matroid axiom violated: {report.violation}"]
    return summary, result, EXIT_OK if report.ok else EXIT_CHECK_FAILED, messages


def _tdi(config: RunConfig):
    game = parse_instance(_read(config.input_path), config.bound(MATROID_BOUND))
    witness = tdi_witness(game)
    result = to_jsonable(witness)
    result["lp_optimum"] = format_rational(game.primal_solution.value)
    imp = witness_imputation(game, witness)
    result["imputation"] = None if imp is None else emit_imputation(imp)
    messages = []
    if not witness.found:
        messages.append("no integral dual attains the LP optimum")
        hyp = game.hypothesis()
        if hyp.holds is False:
            messages.append(f"hypothesis {hyp.name} fails: {hyp.detail}" if hyp.detail else f"hypothesis {hyp.name} fails")
    return _summary(game), result, EXIT_OK if witness.found else EXIT_CHECK_FAILED, messages


_DISPATCH = {
    "solve": _solve,
    "verify-core": _verify_core,
    "audit": _audit,
    "check-perfect": _check_perfect,
    "check-matroid": _check_matroid,
    "tdi-witness": _tdi,
}


def run(config: RunConfig) -> tuple[Report | None, int]:
    """Execute one command; input and bound errors propagate to the caller."""
    start = time.perf_counter()
    summary, result, code, messages = _DISPATCH[config.command](config)
    elapsed = round((time.perf_counter() - start) * 1000, 3) if config.timing else None
    return Report(config.command, to_jsonable(summary), to_jsonable(result), elapsed, tuple(messages)), code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coregames", description="Exact core imputations of cooperative games.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--input", required=True, help="instance JSON file")
        p.add_argument("--imputation", help="imputation JSON file (verify-core)")
        p.add_argument("--format", choices=("json", "text"), default="json")
        p.add_argument("--bound", type=int, default=None, help="size bound for exhaustive checks")
        p.add_argument("--trials", type=int, default=50)
        p.add_argument("--seed", type=int, default=0, help="seed of the audit's random.Random")
        p.add_argument("--no-timing", action="store_true", help="omit timing for byte-stable output")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = RunConfig(
            command=args.command,
            input_path=args.input,
            imputation_path=args.imputation,
            output_format=args.format,
            size_bound=args.bound,
            trials=args.trials,
            seed=args.seed,
            timing=not args.no_timing,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        report, code = run(config)
    except ResourceBoundError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except CoreGamesError as exc:
        print(f"error [{getattr(exc, 'code', 'input')}]: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(report.to_json() if config.output_format == "json" else report.to_text())
    for m in report.messages:
        print(m, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
