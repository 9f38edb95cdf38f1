"""Game families, their characteristic functions and their primal/dual LPs."""

from __future__ import annotations

import abc
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from ..errors import MalformedInputError, ResourceBoundError
from ..graphs import (
    Graph,
    WeightedGraph,
    complement,
    enumerate_maximal_cliques,
    from_mask,
    is_perfect,
    max_weight_stable_set,
    to_mask,
)
from ..lp import GE, LE, MAXIMIZE, MINIMIZE, LinearProgram, LPSolution, solve_lp
from ..matroids import WeightedMatroid, greedy, nonempty_subsets
from ..rational import as_rational

AGENT = "agent"
SATISFACTION = "satisfaction"

DEFAULT_MATROID_BOUND = 10
PERFECTION_BOUND = 12

_ZERO = Fraction(0)


@dataclass(frozen=True)
class GameLPs:
    """Primal LP, its dual, and the object labelling both.

    ``objects[i]`` names primal row ``i`` and dual variable ``i``: an agent id
    for agent-imputation games, a frozenset (clique or subset) otherwise.
    """

    primal: LinearProgram
    dual: LinearProgram
    objects: tuple


@dataclass(frozen=True)
class Hypothesis:
    name: str
    holds: bool | None  # None: not checked (instance above the exhaustive bound)
    detail: str = ""


def _coalition(T: Iterable[int] | None, n: int) -> frozenset[int]:
    if T is None:
        return frozenset(range(n))
    T = frozenset(T)
    bad = [a for a in T if not isinstance(a, int) or not 0 <= a < n]
    if bad:
        raise MalformedInputError(f"coalition members {sorted(bad)} are not agents 0..{n - 1}", code="agent")
    return T


class Game(abc.ABC):
    """A cooperative game whose worth comes from a packing-type LP."""

    kind: str = ""
    imputation_type: str = AGENT

    @property
    @abc.abstractmethod
    def n_agents(self) -> int:
        """Number of agents; agents are ``0..n_agents-1``."""

    @abc.abstractmethod
    def _worth(self, T: frozenset[int]) -> Fraction:
        """Worth of a validated coalition."""

    @abc.abstractmethod
    def build_lps(self) -> GameLPs:
        """Primal relaxation of the grand coalition's problem and its dual."""

    def hypothesis(self) -> Hypothesis:
        return Hypothesis("none", True)

    @cached_property
    def _worth_cache(self) -> dict[frozenset[int], Fraction]:
        return {}

    def worth(self, T: Iterable[int] | None = None) -> Fraction:
        T = _coalition(T, self.n_agents)
        cache = self._worth_cache
        if T not in cache:
            cache[T] = self._worth(T) if T else _ZERO
        return cache[T]

    @cached_property
    def lps(self) -> GameLPs:
        return self.build_lps()

    @cached_property
    def primal_solution(self) -> LPSolution:
        return solve_lp(self.lps.primal)

    @property
    def grand_coalition(self) -> frozenset[int]:
        return frozenset(range(self.n_agents))


class AgentGame(Game):
    """Games whose imputations pay individual agents (bottom-up allocation)."""

    imputation_type = AGENT

    @abc.abstractmethod
    def object_supports(self) -> list[tuple[frozenset[int], Fraction]]:
        """``(agents covering the object, object weight)`` per dual constraint."""


class SatisfactionGame(Game):
    """Games whose imputations give satisfaction to sets of agents (top-down)."""

    imputation_type = SATISFACTION

    @abc.abstractmethod
    def is_object(self, S: frozenset[int]) -> bool:
        """Whether ``S`` may carry satisfaction."""

    def object_cost(self, S: frozenset[int]) -> Fraction:
        """Dual objective coefficient of ``S``; scales its allocated satisfaction."""
        return Fraction(1)

    @abc.abstractmethod
    def agent_weights(self) -> tuple[Fraction, ...]:
        """Right-hand side of the per-agent cover constraint of the dual."""


# -- assignment -------------------------------------------------------------


@dataclass(frozen=True)
class AssignmentGame(AgentGame):
    """Bipartite graph with parts ``left``/``right`` and edge weights.

    ``weights[i]`` belongs to ``graph.sorted_edges()[i]``.
    """

    graph: Graph
    left: frozenset
    right: frozenset
    weights: tuple

    kind = "assignment"

    def __post_init__(self):
        left, right = frozenset(self.left), frozenset(self.right)
        if left & right or left | right != frozenset(range(self.graph.n)):
            raise MalformedInputError("parts U and V must partition the vertices", code="parts")
        for u, v in self.graph.edges:
            if (u in left) == (v in left):
                raise MalformedInputError(f"edge ({u}, {v}) does not join U and V", code="non-bipartite")
        weights = tuple(as_rational(w) for w in self.weights)
        if len(weights) != len(self.graph.edges):
            raise MalformedInputError(f"{len(weights)} weights for {len(self.graph.edges)} edges", code="dimension")
        if any(w < 0 for w in weights):
            raise MalformedInputError("edge weights must be nonnegative", code="negative-weight")
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def from_edges(cls, left, right, edges: Sequence[tuple[int, int]], weights: Sequence) -> AssignmentGame:
        """Build from edges in any order; weights follow ``edges``."""
        if len(edges) != len(weights):
            raise MalformedInputError(f"{len(weights)} weights for {len(edges)} edges", code="dimension")
        n = len(set(left) | set(right))
        graph = Graph(n, list(edges))
        by_edge = {(min(u, v), max(u, v)): w for (u, v), w in zip(edges, weights)}
        return cls(graph, frozenset(left), frozenset(right), tuple(by_edge[e] for e in graph.sorted_edges()))

    @property
    def n_agents(self) -> int:
        return self.graph.n

    @cached_property
    def edges(self) -> list[tuple[int, int]]:
        return self.graph.sorted_edges()

    def object_supports(self):
        return [(frozenset(e), w) for e, w in zip(self.edges, self.weights)]

    def matching_lp(self, T: frozenset[int]) -> tuple[LinearProgram, list[int]] | None:
        """Matching relaxation restricted to ``T`` and the edge indices it uses."""
        cols = [i for i, (u, v) in enumerate(self.edges) if u in T and v in T]
        if not cols:
            return None
        agents = sorted({a for i in cols for a in self.edges[i]})
        rows = [{k: 1 for k, i in enumerate(cols) if a in self.edges[i]} for a in agents]
        lp = LinearProgram(MAXIMIZE, [self.weights[i] for i in cols], rows, [1] * len(rows), [LE] * len(rows))
        return lp, cols

    def _worth(self, T):
        built = self.matching_lp(T)
        if built is None:
            return _ZERO
        sol = solve_lp(built[0])
        if any(x.denominator != 1 for x in sol.primal):
            raise AssertionError(f"fractional vertex {sol.primal} of a bipartite matching LP")
        return sol.value

    def build_lps(self) -> GameLPs:
        agents = sorted({a for e in self.edges for a in e})
        pos = {a: i for i, a in enumerate(agents)}
        m = len(self.edges)
        primal_rows = [{j: 1 for j, e in enumerate(self.edges) if a in e} for a in agents]
        primal = LinearProgram(MAXIMIZE, self.weights, primal_rows, [1] * len(agents), [LE] * len(agents))
        dual_rows = [{pos[u]: 1, pos[v]: 1} for u, v in self.edges]
        dual = LinearProgram(MINIMIZE, [1] * len(agents), dual_rows, self.weights, [GE] * m)
        return GameLPs(primal, dual, tuple(agents))

    def hypothesis(self) -> Hypothesis:
        return Hypothesis("bipartite", True, "assignment graphs are bipartite by construction")


# -- generic packing ----------------------------------------------------------


@dataclass(frozen=True)
class PackingGame(AgentGame):
    """Agents are rows of a 0/1 matrix, objects its columns.

    A coalition may use exactly the objects whose support lies inside it,
    each agent at most once; its worth is the best total object weight.
    """

    matrix: tuple
    weights: tuple

    kind = "generic_packing"

    def __post_init__(self):
        matrix = tuple(tuple(row) for row in self.matrix)
        m = len(matrix[0]) if matrix else 0
        for i, row in enumerate(matrix):
            if len(row) != m:
                raise MalformedInputError(f"matrix row {i} has {len(row)} entries, expected {m}", code="dimension")
            for j, a in enumerate(row):
                if isinstance(a, bool) or a not in (0, 1):
                    raise MalformedInputError(f"matrix entry ({i}, {j}) = {a!r} is not 0/1", code="non-binary-matrix")
        weights = tuple(as_rational(w) for w in self.weights)
        if len(weights) != m:
            raise MalformedInputError(f"{len(weights)} weights for {m} columns", code="dimension")
        if any(w < 0 for w in weights):
            raise MalformedInputError("object weights must be nonnegative", code="negative-weight")
        for j in range(m):
            if not any(row[j] for row in matrix):
                raise MalformedInputError(f"column {j} belongs to no agent", code="empty-column")
        object.__setattr__(self, "matrix", tuple(tuple(int(a) for a in row) for row in matrix))
        object.__setattr__(self, "weights", weights)

    @property
    def n_agents(self) -> int:
        return len(self.matrix)

    @cached_property
    def supports(self) -> list[frozenset[int]]:
        m = len(self.weights)
        return [frozenset(i for i, row in enumerate(self.matrix) if row[j]) for j in range(m)]

    def object_supports(self):
        return list(zip(self.supports, self.weights))

    def _worth(self, T):
        usable = [(to_mask(s), w) for s, w in zip(self.supports, self.weights) if s <= T and w > 0]
        usable.sort(key=lambda p: -p[1])
        suffix = [_ZERO] * (len(usable) + 1)
        for k in range(len(usable) - 1, -1, -1):
            suffix[k] = suffix[k + 1] + usable[k][1]
        best = _ZERO

        def search(k: int, used: int, value: Fraction) -> None:
            nonlocal best
            if value > best:
                best = value
            if k == len(usable) or value + suffix[k] <= best:
                return
            mask, w = usable[k]
            if not mask & used:
                search(k + 1, used | mask, value + w)
            search(k + 1, used, value)

        search(0, 0, _ZERO)
        return best

    def build_lps(self) -> GameLPs:
        agents = [i for i, row in enumerate(self.matrix) if any(row)]
        m = len(self.weights)
        primal = LinearProgram(
            MAXIMIZE,
            self.weights,
            [self.matrix[i] for i in agents],
            [1] * len(agents),
            [LE] * len(agents),
        )
        dual = LinearProgram(
            MINIMIZE,
            [1] * len(agents),
            [[self.matrix[i][j] for i in agents] for j in range(m)],
            self.weights,
            [GE] * m,
        )
        return GameLPs(primal, dual, tuple(agents))

    def hypothesis(self) -> Hypothesis:
        sol = self.primal_solution
        integral = all(x.denominator == 1 for x in sol.primal)
        return Hypothesis(
            "integral-primal-vertex",
            integral and sol.value == self.worth(),
            "returned LP vertex is integral and attains the grand coalition's worth",
        )


# -- stable set / clique --------------------------------------------------------


@dataclass(frozen=True)
class StableSetGame(SatisfactionGame):
    wgraph: WeightedGraph

    kind = "stable_set"

    @property
    def n_agents(self) -> int:
        return self.wgraph.graph.n

    @property
    def graph(self) -> Graph:
        return self.wgraph.graph

    def agent_weights(self):
        return self.wgraph.weights

    def is_object(self, S):
        return bool(S) and all(isinstance(v, int) and 0 <= v < self.n_agents for v in S) and self.graph.is_clique(S)

    def _worth(self, T):
        return max_weight_stable_set(self.wgraph, T)[1]

    @cached_property
    def maximal_cliques(self) -> list[frozenset[int]]:
        return enumerate_maximal_cliques(self.graph)

    def build_lps(self) -> GameLPs:
        cliques = self.maximal_cliques
        n = self.n_agents
        primal = LinearProgram(
            MAXIMIZE,
            self.wgraph.weights,
            [{v: 1 for v in q} for q in cliques],
            [1] * len(cliques),
            [LE] * len(cliques),
        )
        dual = LinearProgram(
            MINIMIZE,
            [1] * len(cliques),
            [{k: 1 for k, q in enumerate(cliques) if v in q} for v in range(n)],
            self.wgraph.weights,
            [GE] * n,
        )
        return GameLPs(primal, dual, tuple(cliques))

    @cached_property
    def _perfection(self):
        if self.n_agents > PERFECTION_BOUND:
            return None
        return is_perfect(self.graph, PERFECTION_BOUND)

    def hypothesis(self) -> Hypothesis:
        report = self._perfection
        if report is None:
            return Hypothesis("perfect-graph", None, f"not checked above {PERFECTION_BOUND} vertices")
        if report.is_perfect:
            return Hypothesis("perfect-graph", True)
        return Hypothesis(
            "perfect-graph",
            False,
            f"induced subgraph on {sorted(report.witness)} has omega={report.witness_omega}, chi={report.witness_chi}",
        )


@dataclass(frozen=True)
class CliqueGame(SatisfactionGame):
    """Worth of a coalition is its heaviest clique.

    Solved as the stable-set game on the complement graph, so satisfaction is
    carried by stable sets of the original graph.
    """

    wgraph: WeightedGraph

    kind = "clique"

    @cached_property
    def stable_game(self) -> StableSetGame:
        return StableSetGame(WeightedGraph(complement(self.wgraph.graph), self.wgraph.weights))

    @property
    def n_agents(self) -> int:
        return self.wgraph.graph.n

    def agent_weights(self):
        return self.wgraph.weights

    def is_object(self, S):
        return self.stable_game.is_object(S)

    def _worth(self, T):
        return self.stable_game.worth(T)

    def build_lps(self) -> GameLPs:
        return self.stable_game.lps

    def hypothesis(self) -> Hypothesis:
        inner = self.stable_game.hypothesis()
        return Hypothesis(inner.name, inner.holds, inner.detail)


# -- matroid ------------------------------------------------------------------


@dataclass(frozen=True)
class MatroidGame(SatisfactionGame):
    wmatroid: WeightedMatroid
    bound: int = DEFAULT_MATROID_BOUND

    kind = "matroid"

    @property
    def n_agents(self) -> int:
        return self.wmatroid.matroid.ground_size

    def agent_weights(self):
        return self.wmatroid.weights

    def rank(self, S: Iterable[int]) -> int:
        return self.wmatroid.matroid.rank_mask(to_mask(S))

    def is_object(self, S):
        return bool(S) and all(isinstance(e, int) and 0 <= e < self.n_agents for e in S)

    def object_cost(self, S):
        return Fraction(self.rank(S))

    def _worth(self, T):
        return greedy(self.wmatroid.matroid, self.wmatroid.weights, sorted(T))[1]

    def build_lps(self) -> GameLPs:
        n = self.n_agents
        if n > self.bound:
            raise ResourceBoundError(
                f"matroid LP enumerates 2^{n} - 1 subsets; ground set above bound {self.bound}"
            )
        subsets = nonempty_subsets(n)
        ranks = [self.rank(S) for S in subsets]
        primal = LinearProgram(
            MAXIMIZE,
            self.wmatroid.weights,
            [{e: 1 for e in S} for S in subsets],
            ranks,
            [LE] * len(subsets),
        )
        dual = LinearProgram(
            MINIMIZE,
            ranks,
            [{k: 1 for k, S in enumerate(subsets) if e in S} for e in range(n)],
            self.wmatroid.weights,
            [GE] * n,
        )
        return GameLPs(primal, dual, tuple(subsets))

    def hypothesis(self) -> Hypothesis:
        heavy_loops = sorted(e for e in self.wmatroid.matroid.loops() if self.wmatroid.weights[e] > 0)
        if heavy_loops:
            return Hypothesis(
                "no-weighted-loops",
                False,
                f"loops {heavy_loops} carry positive weight; core and dual optima can differ on them",
            )
        return Hypothesis("no-weighted-loops", True)


def coalitions(n: int, proper: bool = True):
    """Nonempty coalitions of ``0..n-1`` as ``(mask, frozenset)`` pairs, by mask."""
    top = (1 << n) - 1 if proper else 1 << n
    for mask in range(1, top):
        yield mask, from_mask(mask)
