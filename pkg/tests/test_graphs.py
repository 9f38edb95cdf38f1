import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from coregames.errors import MalformedInputError, ResourceBoundError
from coregames.graphs import (
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
from coregames.random_instances import random_graph, random_perfect_graph

K3 = Graph.complete(3)
C4 = Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
C5 = Graph.cycle(5)


@st.composite
def graphs(draw, max_n=7):
    n = draw(st.integers(min_value=0, max_value=max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph(n, [p for p, keep in zip(pairs, mask) if keep])


def test_rejects_bad_edges():
    for edges, code in [([(0, 0)], "self-loop"), ([(0, 1), (1, 0)], "duplicate-edge"), ([(0, 3)], "graph")]:
        with pytest.raises(MalformedInputError) as info:
            Graph(3, edges)
        assert info.value.code == code


def test_negative_weight_rejected():
    with pytest.raises(MalformedInputError):
        WeightedGraph(K3, [1, -1, 1])


def test_complement_examples():
    assert complement(K3) == Graph.empty(3)
    assert len(complement(C5).edges) == 5
    assert complement(Graph.empty(4)) == Graph.complete(4)


def test_maximal_clique_examples():
    assert enumerate_maximal_cliques(K3) == [frozenset({0, 1, 2})]
    assert set(enumerate_maximal_cliques(C4)) == {frozenset(e) for e in [(0, 1), (1, 2), (2, 3), (0, 3)]}
    assert enumerate_maximal_cliques(Graph.empty(3)) == [frozenset({0}), frozenset({1}), frozenset({2})]


@pytest.mark.parametrize("g,omega,chi", [(K3, 3, 3), (C5, 2, 3), (C4, 2, 2)])
def test_omega_chi_examples(g, omega, chi):
    assert clique_number(g) == omega
    assert chromatic_number(g) == chi


def test_stable_set_examples():
    assert max_weight_stable_set(WeightedGraph(C5))[1] == 2
    assert max_weight_stable_set(WeightedGraph(K3, [4, 1, 1])) == (frozenset({0}), 4)
    assert max_weight_stable_set(WeightedGraph(Graph.empty(3), [1, 2, 3])) == (frozenset({0, 1, 2}), 6)


def test_stable_set_ties_pick_lexicographically_smallest():
    # {0,2} and {1,3} both weigh 2 in C4
    assert max_weight_stable_set(WeightedGraph(C4))[0] == frozenset({0, 2})


def test_perfection_examples():
    assert is_perfect(C4).is_perfect
    report = is_perfect(C5)
    assert not report.is_perfect
    assert report.witness == frozenset(range(5))
    assert (report.omega, report.chi) == (2, 3)
    assert is_perfect(Graph(1, [])).is_perfect


def test_perfection_bound():
    with pytest.raises(ResourceBoundError):
        is_perfect(Graph.cycle(13))
    assert is_perfect(Graph.cycle(4), bound=4).is_perfect


def test_odd_hole_examples():
    hole = find_odd_hole_or_antihole(C5)
    assert hole.kind == "hole" and hole.cycle == (0, 1, 2, 3, 4)
    assert find_odd_hole_or_antihole(C4) is None
    anti = find_odd_hole_or_antihole(complement(Graph.cycle(7)))
    assert anti.kind == "antihole" and len(anti.cycle) == 7


@settings(max_examples=80, deadline=None)
@given(graphs())
def test_against_brute_force(g):
    edges = sorted(g.edges)
    assert clique_number(g) == oracles.clique_number(g.n, edges)
    assert chromatic_number(g) == oracles.chromatic_number(g.n, edges)
    assert set(enumerate_maximal_cliques(g)) == oracles.maximal_cliques(g.n, edges)


@settings(max_examples=60, deadline=None)
@given(graphs(), st.lists(st.fractions(min_value=0, max_value=10, max_denominator=5), min_size=7, max_size=7))
def test_stable_set_weight_matches_enumeration(g, weights):
    wg = WeightedGraph(g, weights[: g.n])
    chosen, weight = max_weight_stable_set(wg)
    assert g.is_stable(chosen)
    assert sum((wg.weights[v] for v in chosen), Fraction(0)) == weight
    assert weight == oracles.max_stable_weight(g.n, sorted(g.edges), wg.weights)


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=8))
def test_structural_invariants(g):
    assert complement(complement(g)) == g
    assert chromatic_number(g) >= clique_number(g)
    assert clique_number(g) == max_weight_stable_set(WeightedGraph(complement(g)))[1]
    cliques = enumerate_maximal_cliques(g)
    assert len(cliques) == len(set(cliques))
    if g.n:
        assert any(len(q) == clique_number(g) for q in cliques)


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=7))
def test_perfection_matches_definition_and_odd_holes(g):
    report = is_perfect(g)
    assert report.is_perfect == oracles.is_perfect(g.n, sorted(g.edges))
    assert report.is_perfect == (find_odd_hole_or_antihole(g) is None)
    if report.is_perfect:
        assert report.omega == report.chi
    else:
        assert clique_number(g, report.witness) < chromatic_number(g, report.witness)


def test_generated_perfect_families_are_perfect():
    rng = random.Random(3)
    for _ in range(40):
        family, g = random_perfect_graph(rng, rng.randint(1, 8))
        assert is_perfect(g).is_perfect, family


def test_odd_hole_oracle_agreement_on_random_graphs():
    rng = random.Random(11)
    for _ in range(30):
        g = random_graph(rng, rng.randint(5, 8), rng.uniform(0.3, 0.7))
        expected = oracles.has_odd_hole_or_antihole(g.n, sorted(g.edges))
        assert (find_odd_hole_or_antihole(g) is not None) == expected
