"""Seeded random instances for audits and tests.

Every generator takes a :class:`random.Random` so callers control the
stream; nothing here touches global random state.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from .games import AssignmentGame, MatroidGame
from .graphs import Graph, WeightedGraph, complement, from_mask
from .matroids import (
    ExplicitMatroid,
    GraphicMatroid,
    Matroid,
    PartitionMatroid,
    UniformMatroid,
    WeightedMatroid,
)

MATROID_KINDS = ("uniform", "graphic", "partition", "explicit")


def random_graph(rng: random.Random, n: int, p: float = 0.5) -> Graph:
    return Graph(n, [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p])


def random_bipartite_graph(rng: random.Random, n: int, p: float = 0.5) -> Graph:
    side = [rng.random() < 0.5 for _ in range(n)]
    return Graph(n, [(u, v) for u, v in itertools.combinations(range(n), 2) if side[u] != side[v] and rng.random() < p])


def random_cobipartite_graph(rng: random.Random, n: int, p: float = 0.5) -> Graph:
    return complement(random_bipartite_graph(rng, n, p))


def random_chordal_graph(rng: random.Random, n: int) -> Graph:
    """Each new vertex attaches to a random clique of the earlier ones (kept simplicial)."""
    adj: list[set[int]] = [set() for _ in range(n)]
    for v in range(1, n):
        if rng.random() < 0.15:
            continue
        u = rng.randrange(v)
        clique = [u]
        others = list(adj[u])
        rng.shuffle(others)
        for w in others:
            if all(w in adj[c] for c in clique) and rng.random() < 0.7:
                clique.append(w)
        for c in clique:
            adj[v].add(c)
            adj[c].add(v)
    return Graph(n, [(u, v) for u in range(n) for v in adj[u] if u < v])


def random_perfect_graph(rng: random.Random, n: int) -> tuple[str, Graph]:
    family = rng.choice(("bipartite", "cobipartite", "chordal"))
    if family == "bipartite":
        return family, random_bipartite_graph(rng, n, rng.uniform(0.3, 0.8))
    if family == "cobipartite":
        return family, random_cobipartite_graph(rng, n, rng.uniform(0.3, 0.8))
    return family, random_chordal_graph(rng, n)


def random_rational_weights(rng: random.Random, n: int, max_num: int = 12, max_den: int = 4) -> tuple[Fraction, ...]:
    return tuple(Fraction(rng.randint(0, max_num), rng.randint(1, max_den)) for _ in range(n))


def random_integer_weights(rng: random.Random, n: int, low: int = 0, high: int = 5) -> tuple[Fraction, ...]:
    return tuple(Fraction(rng.randint(low, high)) for _ in range(n))


def random_assignment_game(
    rng: random.Random, max_side: int = 4, max_weight: int = 10, p: float = 0.6
) -> AssignmentGame:
    a, b = rng.randint(1, max_side), rng.randint(1, max_side)
    left, right = range(a), range(a, a + b)
    edges = [(u, v) for u in left for v in right if rng.random() < p]
    weights = [rng.randint(1, max_weight) for _ in edges]
    return AssignmentGame.from_edges(left, right, edges, weights)


def _random_graphic(rng: random.Random, n: int) -> GraphicMatroid:
    vertices = 2
    while vertices * (vertices - 1) // 2 < n:
        vertices += 1
    vertices += rng.randint(0, 2)
    pairs = rng.sample(list(itertools.combinations(range(vertices), 2)), n)
    return GraphicMatroid(Graph(vertices, pairs))


def _random_partition(rng: random.Random, n: int) -> PartitionMatroid:
    elements = list(range(n))
    rng.shuffle(elements)
    blocks = []
    while elements:
        size = rng.randint(1, len(elements))
        blocks.append(sorted(elements[:size]))
        elements = elements[size:]
    return PartitionMatroid(blocks, [rng.randint(1, len(b)) for b in blocks])


def explicit_copy(m: Matroid) -> ExplicitMatroid:
    """The same matroid listed by its independent sets."""
    n = m.ground_size
    independent = [from_mask(mask) for mask in range(1 << n) if m.rank_mask(mask) == bin(mask).count("1")]
    return ExplicitMatroid(n, independent)


def random_matroid(rng: random.Random, kind: str, n: int) -> Matroid:
    """Random loopless matroid of the given kind on ``n`` elements."""
    if kind == "uniform":
        return UniformMatroid(n, rng.randint(1, max(n, 1)))
    if kind == "graphic":
        return _random_graphic(rng, n)
    if kind == "partition":
        return _random_partition(rng, n)
    if kind == "explicit":
        base = rng.choice(("uniform", "graphic", "partition"))
        return explicit_copy(random_matroid(rng, base, n))
    raise ValueError(f"unknown matroid kind {kind!r}")


def random_matroid_game(rng: random.Random, kind: str, n: int, max_weight: int = 10) -> MatroidGame:
    m = random_matroid(rng, kind, n)
    return MatroidGame(WeightedMatroid(m, random_integer_weights(rng, n, 0, max_weight)))


def random_weighted_graph(rng: random.Random, graph: Graph, integral: bool = False) -> WeightedGraph:
    if integral:
        return WeightedGraph(graph, random_integer_weights(rng, graph.n, 0, 5))
    return WeightedGraph(graph, random_rational_weights(rng, graph.n))
