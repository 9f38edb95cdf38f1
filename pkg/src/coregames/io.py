"""JSON interchange for graphs, matroids, game instances, imputations and reports.

Rationals are always written as canonical ``"p/q"`` strings (``"p"`` when
the denominator is 1).  Sets used as keys are written as comma-joined
ascending indices, e.g. ``"0,2,3"``.
"""

from __future__ import annotations

import dataclasses
import json
from collections.abc import Mapping
from fractions import Fraction

from .errors import MalformedInputError
from .games import (
    AgentImputation,
    AssignmentGame,
    CliqueGame,
    Game,
    MatroidGame,
    PackingGame,
    SatisfactionImputation,
    StableSetGame,
)
from .graphs import Graph, WeightedGraph
from .matroids import (
    DEFAULT_BOUND as MATROID_BOUND,
    ExplicitMatroid,
    GraphicMatroid,
    Matroid,
    PartitionMatroid,
    UniformMatroid,
    WeightedMatroid,
    verify_rank_axioms,
)
from .rational import format_rational, parse_rational

GAME_KINDS = ("assignment", "stable_set", "clique", "matroid", "generic_packing")


def _schema(message: str) -> MalformedInputError:
    return MalformedInputError(message, code="schema")


def _require(doc: Mapping, key: str, kind: type | tuple, where: str):
    if key not in doc:
        raise _schema(f"{where}: missing field {key!r}")
    value = doc[key]
    if not isinstance(value, kind) or isinstance(value, bool):
        raise _schema(f"{where}: field {key!r} has the wrong type")
    return value


def _rationals(values, where: str) -> tuple[Fraction, ...]:
    if not isinstance(values, list):
        raise _schema(f"{where}: weights must be a list of rational strings")
    out = []
    for i, v in enumerate(values):
        if isinstance(v, int) and not isinstance(v, bool):
            out.append(Fraction(v))
            continue
        try:
            out.append(parse_rational(v))
        except MalformedInputError as exc:
            raise MalformedInputError(f"{where}[{i}]: {exc}", code=exc.code) from None
    for i, w in enumerate(out):
        if w < 0:
            raise MalformedInputError(f"{where}[{i}] is negative ({format_rational(w)})", code="negative-weight")
    return tuple(out)


def _int_list(value, where: str) -> list[int]:
    if not isinstance(value, list) or any(not isinstance(v, int) or isinstance(v, bool) for v in value):
        raise _schema(f"{where} must be a list of integers")
    return value


def load_document(document) -> dict:
    if isinstance(document, Mapping):
        return dict(document)
    try:
        doc = json.loads(document)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise MalformedInputError(f"invalid JSON: {exc}", code="json") from None
    if not isinstance(doc, dict):
        raise _schema("top-level JSON value must be an object")
    return doc


# -- graphs and matroids --------------------------------------------------------


def parse_graph(doc) -> tuple[Graph, tuple[Fraction, ...] | None]:
    if not isinstance(doc, Mapping):
        raise _schema("graph must be an object")
    n = _require(doc, "n", int, "graph")
    edges = _require(doc, "edges", list, "graph")
    pairs = []
    for e in edges:
        pair = _int_list(e, "graph edge")
        if len(pair) != 2:
            raise _schema(f"graph edge {e!r} must have two endpoints")
        pairs.append(tuple(pair))
    graph = Graph(n, pairs)
    weights = _rationals(doc["weights"], "graph.weights") if "weights" in doc else None
    return graph, weights


def emit_graph(graph: Graph, weights=None) -> dict:
    doc = {"n": graph.n, "edges": [list(e) for e in graph.sorted_edges()]}
    if weights is not None:
        doc["weights"] = [format_rational(w) for w in weights]
    return doc


def parse_matroid(doc) -> Matroid:
    if not isinstance(doc, Mapping):
        raise _schema("matroid must be an object")
    kind = _require(doc, "kind", str, "matroid")
    if kind == "uniform":
        return UniformMatroid(_require(doc, "n", int, "matroid"), _require(doc, "k", int, "matroid"))
    if kind == "graphic":
        graph, _ = parse_graph(_require(doc, "graph", dict, "matroid"))
        return GraphicMatroid(graph)
    if kind == "partition":
        blocks = [_int_list(b, "matroid block") for b in _require(doc, "blocks", list, "matroid")]
        caps = _int_list(_require(doc, "capacities", list, "matroid"), "matroid capacities")
        return PartitionMatroid(blocks, caps)
    if kind == "explicit":
        n = _require(doc, "n", int, "matroid")
        sets = [_int_list(s, "independent set") for s in _require(doc, "independent", list, "matroid")]
        return ExplicitMatroid(n, sets)
    raise _schema(f"unknown matroid kind {kind!r}")


def emit_matroid(m: Matroid) -> dict:
    if isinstance(m, UniformMatroid):
        return {"kind": "uniform", "n": m.n, "k": m.k}
    if isinstance(m, GraphicMatroid):
        return {"kind": "graphic", "graph": emit_graph(m.graph)}
    if isinstance(m, PartitionMatroid):
        return {"kind": "partition", "blocks": [list(b) for b in m.blocks], "capacities": list(m.capacities)}
    if isinstance(m, ExplicitMatroid):
        sets = sorted((sorted(s) for s in m.independent), key=lambda s: (len(s), s))
        return {"kind": "explicit", "n": m.n, "independent": sets}
    raise TypeError(f"cannot serialise {type(m).__name__}")


# -- game instances ---------------------------------------------------------------


def parse_instance(document, bound: int = MATROID_BOUND) -> Game:
    """Parse and validate a game instance document (bytes, str or dict)."""
    doc = load_document(document)
    kind = _require(doc, "game", str, "instance")
    if kind not in GAME_KINDS:
        raise MalformedInputError(f"unknown game {kind!r}; expected one of {', '.join(GAME_KINDS)}", code="unknown-game")

    if kind in ("stable_set", "clique"):
        graph, graph_weights = parse_graph(_require(doc, "graph", dict, "instance"))
        top = _rationals(doc["weights"], "weights") if "weights" in doc else None
        if top is not None and graph_weights is not None:
            raise _schema("weights given both at top level and inside the graph")
        wg = WeightedGraph(graph, top if top is not None else graph_weights)
        return StableSetGame(wg) if kind == "stable_set" else CliqueGame(wg)

    if kind == "assignment":
        graph_doc = _require(doc, "graph", dict, "instance")
        if "weights" in graph_doc:
            raise _schema("assignment edge weights belong in the top-level 'weights' list")
        graph, _ = parse_graph(graph_doc)
        parts = _require(doc, "parts", dict, "instance")
        left = _int_list(_require(parts, "U", list, "parts"), "parts.U")
        right = _int_list(_require(parts, "V", list, "parts"), "parts.V")
        if len(set(left)) != len(left) or len(set(right)) != len(right):
            raise MalformedInputError("an agent is listed twice in parts", code="parts")
        if set(left) | set(right) != set(range(graph.n)) or set(left) & set(right):
            raise MalformedInputError("parts U and V must partition the vertices 0..n-1", code="parts")
        edges = [tuple(e) for e in graph_doc["edges"]]
        weights = _rationals(doc["weights"], "weights") if "weights" in doc else (Fraction(1),) * len(edges)
        return AssignmentGame.from_edges(left, right, edges, weights)

    if kind == "matroid":
        m = parse_matroid(_require(doc, "matroid", dict, "instance"))
        if m.ground_size <= bound:
            report = verify_rank_axioms(m, bound)
            if not report.ok:
                raise MalformedInputError(f"matroid axiom violated: {report.violation}", code="matroid-axiom")
        weights = _rationals(doc["weights"], "weights") if "weights" in doc else None
        return MatroidGame(WeightedMatroid(m, weights), bound=max(bound, MATROID_BOUND))

    matrix = _require(doc, "matrix", list, "instance")
    for i, row in enumerate(matrix):
        if not isinstance(row, list):
            raise _schema(f"matrix row {i} must be a list")
    weights = _rationals(_require(doc, "weights", list, "instance"), "weights")
    return PackingGame(matrix, weights)


def emit_instance(game: Game) -> dict:
    if isinstance(game, (StableSetGame, CliqueGame)):
        return {
            "game": game.kind,
            "graph": emit_graph(game.wgraph.graph),
            "weights": [format_rational(w) for w in game.wgraph.weights],
        }
    if isinstance(game, AssignmentGame):
        return {
            "game": "assignment",
            "graph": emit_graph(game.graph),
            "parts": {"U": sorted(game.left), "V": sorted(game.right)},
            "weights": [format_rational(w) for w in game.weights],
        }
    if isinstance(game, MatroidGame):
        return {
            "game": "matroid",
            "matroid": emit_matroid(game.wmatroid.matroid),
            "weights": [format_rational(w) for w in game.wmatroid.weights],
        }
    if isinstance(game, PackingGame):
        return {
            "game": "generic_packing",
            "matrix": [list(row) for row in game.matrix],
            "weights": [format_rational(w) for w in game.weights],
        }
    raise TypeError(f"cannot serialise {type(game).__name__}")


# -- imputations ----------------------------------------------------------------


def set_key(S) -> str:
    return ",".join(str(v) for v in sorted(S))


def parse_set_key(key: str) -> frozenset[int]:
    try:
        members = [int(part) for part in key.split(",")]
    except ValueError:
        raise MalformedInputError(f"bad set key {key!r}; expected comma-joined indices", code="schema") from None
    if members != sorted(set(members)):
        raise MalformedInputError(f"set key {key!r} must list distinct indices in ascending order", code="schema")
    return frozenset(members)


def parse_imputation(document) -> AgentImputation | SatisfactionImputation:
    doc = load_document(document)
    kind = _require(doc, "type", str, "imputation")
    values = _require(doc, "values", dict, "imputation")
    parsed = {}
    for key, text in values.items():
        try:
            value = parse_rational(text) if not isinstance(text, int) or isinstance(text, bool) else Fraction(text)
        except MalformedInputError as exc:
            raise MalformedInputError(f"imputation value for {key!r}: {exc}", code=exc.code) from None
        parsed[key] = value
    if kind == "agent":
        payoffs = {}
        for key, value in parsed.items():
            S = parse_set_key(key)
            if len(S) != 1:
                raise _schema(f"agent imputation key {key!r} must be a single agent")
            payoffs[next(iter(S))] = value
        return AgentImputation(payoffs)
    if kind == "satisfaction":
        return SatisfactionImputation({parse_set_key(k): v for k, v in parsed.items()})
    raise _schema(f"unknown imputation type {kind!r}")


def emit_imputation(imp) -> dict:
    if isinstance(imp, AgentImputation):
        return {"type": "agent", "values": {str(a): format_rational(v) for a, v in imp.payoffs.items()}}
    return {"type": "satisfaction", "values": {set_key(S): format_rational(v) for S, v in imp.support.items()}}


# -- generic report conversion ----------------------------------------------------------


def to_jsonable(obj):
    """Recursively convert results to JSON-ready values with exact rational strings."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, (AgentImputation, SatisfactionImputation)):
        return emit_imputation(obj)
    if isinstance(obj, (frozenset, set)):
        return sorted(obj)
    if isinstance(obj, Mapping):
        return {(set_key(k) if isinstance(k, (frozenset, set, tuple)) else str(k)): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if dataclasses.is_dataclass(obj):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    raise TypeError(f"cannot convert {type(obj).__name__} to JSON")


def dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=True)
