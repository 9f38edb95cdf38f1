import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coregames.errors import MalformedInputError
from coregames.games import (
    AgentImputation,
    AssignmentGame,
    CliqueGame,
    PackingGame,
    SatisfactionImputation,
    StableSetGame,
    verify_core_membership,
)
from coregames.graphs import Graph, WeightedGraph
from coregames.io import dumps, emit_imputation, emit_instance, parse_imputation, parse_instance
from coregames.random_instances import (
    MATROID_KINDS,
    random_assignment_game,
    random_graph,
    random_matroid_game,
    random_weighted_graph,
)


def test_k3_default_weights():
    game = parse_instance(b'{"game":"stable_set","graph":{"n":3,"edges":[[0,1],[1,2],[0,2]]}}')
    assert isinstance(game, StableSetGame)
    assert game.wgraph == WeightedGraph(Graph.complete(3))


def test_single_edge_assignment():
    game = parse_instance({"game": "assignment", "graph": {"n": 2, "edges": [[0, 1]]}, "parts": {"U": [0], "V": [1]}})
    assert isinstance(game, AssignmentGame) and game.worth() == 1


def test_graph_weights_inside_graph_document():
    game = parse_instance({"game": "clique", "graph": {"n": 2, "edges": [], "weights": ["1/2", "3"]}})
    assert isinstance(game, CliqueGame) and game.worth() == 3


def assignment_doc(**over):
    doc = {"game": "assignment", "graph": {"n": 3, "edges": [[0, 1], [0, 2]]}, "parts": {"U": [0], "V": [1, 2]}, "weights": ["3", "2"]}
    doc.update(over)
    return doc


@pytest.mark.parametrize(
    "doc,code",
    [
        (b"{not json", "json"),
        ("[1, 2]", "schema"),
        ({"game": "tournament"}, "unknown-game"),
        ({"game": "stable_set"}, "schema"),
        ({"game": "stable_set", "graph": {"n": 2, "edges": []}, "weights": ["1/0", "1"]}, "zero-denominator"),
        ({"game": "stable_set", "graph": {"n": 2, "edges": []}, "weights": ["x", "1"]}, "malformed-rational"),
        ({"game": "stable_set", "graph": {"n": 2, "edges": []}, "weights": ["-1", "1"]}, "negative-weight"),
        ({"game": "stable_set", "graph": {"n": 2, "edges": [[0, 1], [1, 0]]}}, "duplicate-edge"),
        ({"game": "stable_set", "graph": {"n": 2, "edges": [[0, 1]], "weights": ["1", "1"]}, "weights": ["1", "1"]}, "schema"),
        (assignment_doc(parts={"U": [0, 1], "V": [2]}), "non-bipartite"),
        (assignment_doc(parts={"U": [0], "V": [1]}), "parts"),
        ({"game": "matroid", "matroid": {"kind": "explicit", "n": 2, "independent": [[], [0, 1]]}}, "matroid-axiom"),
        ({"game": "matroid", "matroid": {"kind": "fano"}}, "schema"),
        ({"game": "generic_packing", "matrix": [[1, 2]], "weights": ["1", "1"]}, "non-binary-matrix"),
    ],
)
def test_error_codes(doc, code):
    with pytest.raises(MalformedInputError) as info:
        parse_instance(doc)
    assert info.value.code == code


def test_large_explicit_matroid_skips_axiom_check_above_bound():
    doc = {"game": "matroid", "matroid": {"kind": "explicit", "n": 3, "independent": [[], [0, 1]]}}
    with pytest.raises(MalformedInputError):
        parse_instance(doc, bound=3)
    assert parse_instance(doc, bound=2).n_agents == 3


def random_game(rng):
    kind = rng.choice(("assignment", "stable_set", "clique", "matroid", "generic_packing"))
    if kind == "assignment":
        return random_assignment_game(rng)
    if kind == "matroid":
        return random_matroid_game(rng, rng.choice(MATROID_KINDS), rng.randint(1, 6))
    if kind == "generic_packing":
        n, m = rng.randint(1, 4), rng.randint(1, 4)
        matrix = [[int(rng.random() < 0.5) for _ in range(m)] for _ in range(n)]
        for j in range(m):
            matrix[rng.randrange(n)][j] = 1
        return PackingGame(matrix, [Fraction(rng.randint(0, 9), rng.randint(1, 3)) for _ in range(m)])
    wg = random_weighted_graph(rng, random_graph(rng, rng.randint(1, 7)))
    return StableSetGame(wg) if kind == "stable_set" else CliqueGame(wg)


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=0, max_value=2**32))
def test_instance_round_trip(seed):
    game = random_game(random.Random(seed))
    doc = emit_instance(game)
    again = parse_instance(json.dumps(doc).encode())
    assert again == game
    assert emit_instance(again) == doc


def test_imputation_files():
    agent = parse_imputation('{"type": "agent", "values": {"0": "5", "1": "0"}}')
    assert agent == AgentImputation({0: 5})
    sat = parse_imputation({"type": "satisfaction", "values": {"0,2,3": "1/2", "1": "2"}})
    assert sat == SatisfactionImputation({(0, 2, 3): Fraction(1, 2), (1,): 2})
    assert emit_imputation(sat) == {"type": "satisfaction", "values": {"0,2,3": "1/2", "1": "2"}}


@pytest.mark.parametrize(
    "doc",
    [
        {"type": "agent", "values": {"0,1": "1"}},
        {"type": "satisfaction", "values": {"2,1": "1"}},
        {"type": "satisfaction", "values": {"a": "1"}},
        {"type": "share", "values": {}},
        {"type": "agent", "values": {"0": "1/0"}},
    ],
)
def test_bad_imputations(doc):
    with pytest.raises(MalformedInputError):
        parse_imputation(doc)


@settings(max_examples=60, deadline=None)
@given(st.dictionaries(st.frozensets(st.integers(0, 6), min_size=1), st.fractions(min_value=0, max_value=9, max_denominator=7), max_size=5))
def test_imputation_round_trip(support):
    imp = SatisfactionImputation(support)
    assert parse_imputation(json.dumps(emit_imputation(imp))) == imp


def test_reports_use_rational_strings():
    game = StableSetGame(WeightedGraph(Graph.cycle(5)))
    report = verify_core_membership(game, SatisfactionImputation({(0, 1): Fraction(1, 2)}))
    doc = json.loads(dumps(report))
    assert doc["worth_total"] == "2" and doc["satisfaction_total"] == "1/2"
    assert doc["violations"][0]["coalition"] == [0]
