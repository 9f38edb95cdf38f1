"""Exact combinatorics on small simple graphs.

Vertex subsets are handled internally as integer bitmasks.  All routines are
exhaustive (memoised over subsets), so they are meant for graphs with a few
dozen vertices at most; perfection and odd-hole checks enforce an explicit
size bound.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .errors import MalformedInputError, ResourceBoundError
from .rational import as_rational

DEFAULT_BOUND = 12


def to_mask(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def from_mask(mask: int) -> frozenset[int]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return frozenset(out)


def _low(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    ``edges`` is normalised to a frozenset of ``(u, v)`` pairs with ``u < v``.
    """

    n: int
    edges: frozenset

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 0:
            raise MalformedInputError(f"vertex count must be a natural number, got {self.n!r}", code="graph")
        seen = set()
        for pair in self.edges:
            try:
                u, v = pair
            except (TypeError, ValueError):
                raise MalformedInputError(f"edge {pair!r} is not a pair", code="graph") from None
            if not (isinstance(u, int) and isinstance(v, int)) or not (0 <= u < self.n and 0 <= v < self.n):
                raise MalformedInputError(f"edge {pair!r} has an endpoint outside 0..{self.n - 1}", code="graph")
            if u == v:
                raise MalformedInputError(f"self-loop at vertex {u}", code="self-loop")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise MalformedInputError(f"duplicate edge {key}", code="duplicate-edge")
            seen.add(key)
        object.__setattr__(self, "edges", frozenset(seen))

    @classmethod
    def cycle(cls, n: int) -> Graph:
        return cls(n, [(i, (i + 1) % n) for i in range(n)])

    @classmethod
    def complete(cls, n: int) -> Graph:
        return cls(n, [(u, v) for u in range(n) for v in range(u + 1, n)])

    @classmethod
    def empty(cls, n: int) -> Graph:
        return cls(n, [])

    @cached_property
    def adj(self) -> tuple[int, ...]:
        adj = [0] * self.n
        for u, v in self.edges:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return tuple(adj)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def is_clique(self, vertices: Iterable[int]) -> bool:
        mask = to_mask(vertices)
        return all(mask & ~(1 << v) & ~self.adj[v] == 0 for v in from_mask(mask))

    def is_stable(self, vertices: Iterable[int]) -> bool:
        mask = to_mask(vertices)
        return all(self.adj[v] & mask == 0 for v in from_mask(mask))

    # Memo tables keyed by vertex mask, filled lazily.
    @cached_property
    def _omega(self) -> dict[int, int]:
        return {0: 0}

    @cached_property
    def _chi(self) -> dict[int, int]:
        return {0: 0}

    @cached_property
    def _independent(self) -> dict[int, bool]:
        return {0: True}


@dataclass(frozen=True)
class WeightedGraph:
    graph: Graph
    weights: tuple = None

    def __post_init__(self):
        if self.weights is None:
            weights = (Fraction(1),) * self.graph.n
        else:
            weights = tuple(as_rational(w) for w in self.weights)
        if len(weights) != self.graph.n:
            raise MalformedInputError(
                f"{len(weights)} weights for {self.graph.n} vertices", code="dimension"
            )
        for v, w in enumerate(weights):
            if w < 0:
                raise MalformedInputError(f"vertex {v} has negative weight {w}", code="negative-weight")
        object.__setattr__(self, "weights", weights)

    @cached_property
    def _stable(self) -> dict[int, tuple[Fraction, tuple[int, ...]]]:
        return {0: (Fraction(0), ())}


@dataclass(frozen=True)
class PerfectionReport:
    is_perfect: bool
    omega: int
    chi: int
    witness: frozenset[int] | None = None
    witness_omega: int | None = None
    witness_chi: int | None = None


@dataclass(frozen=True)
class OddHole:
    kind: str  # "hole" (in g) or "antihole" (a hole of the complement)
    cycle: tuple[int, ...]


def complement(g: Graph) -> Graph:
    return Graph(g.n, [(u, v) for u in range(g.n) for v in range(u + 1, g.n) if not g.has_edge(u, v)])


def enumerate_maximal_cliques(g: Graph) -> list[frozenset[int]]:
    """Inclusion-maximal cliques via Bron-Kerbosch with pivoting, sorted lexicographically."""
    adj = g.adj
    found: list[frozenset[int]] = []

    def expand(r: int, p: int, x: int) -> None:
        if not p and not x:
            found.append(from_mask(r))
            return
        px = p | x
        # Pivot on the vertex covering most of P; ties go to the lowest index.
        pivot = max(from_mask(px), key=lambda u: (bin(p & adj[u]).count("1"), -u))
        candidates = p & ~adj[pivot]
        while candidates:
            v = _low(candidates)
            bit = 1 << v
            expand(r | bit, p & adj[v], x & adj[v])
            p &= ~bit
            x |= bit
            candidates &= ~bit

    if g.n:
        expand(0, g.full_mask, 0)
    return sorted(found, key=lambda c: sorted(c))


def _clique_number_mask(g: Graph, mask: int) -> int:
    memo = g._omega
    if mask in memo:
        return memo[mask]
    v = _low(mask)
    rest = mask & ~(1 << v)
    value = max(_clique_number_mask(g, rest), 1 + _clique_number_mask(g, rest & g.adj[v]))
    memo[mask] = value
    return value


def _is_independent_mask(g: Graph, mask: int) -> bool:
    memo = g._independent
    if mask in memo:
        return memo[mask]
    v = _low(mask)
    rest = mask & ~(1 << v)
    value = not (g.adj[v] & rest) and _is_independent_mask(g, rest)
    memo[mask] = value
    return value


def _chromatic_number_mask(g: Graph, mask: int) -> int:
    memo = g._chi
    if mask in memo:
        return memo[mask]
    # The colour class of the lowest vertex v is v plus an independent subset
    # of its non-neighbours; every proper colouring has this shape.
    v = _low(mask)
    bit = 1 << v
    free = mask & ~bit & ~g.adj[v]
    best = None
    sub = free
    while True:
        if _is_independent_mask(g, sub):
            k = _chromatic_number_mask(g, mask & ~(sub | bit))
            if best is None or k < best:
                best = k
        if sub == 0:
            break
        sub = (sub - 1) & free
    memo[mask] = best + 1
    return best + 1


def clique_number(g: Graph, vertices: Iterable[int] | None = None) -> int:
    mask = g.full_mask if vertices is None else to_mask(vertices)
    return _clique_number_mask(g, mask)


def chromatic_number(g: Graph, vertices: Iterable[int] | None = None) -> int:
    mask = g.full_mask if vertices is None else to_mask(vertices)
    return _chromatic_number_mask(g, mask)


def _stable_mask(wg: WeightedGraph, mask: int) -> tuple[Fraction, tuple[int, ...]]:
    memo = wg._stable
    if mask in memo:
        return memo[mask]
    g = wg.graph
    v = _low(mask)
    rest = mask & ~(1 << v)
    w_out, s_out = _stable_mask(wg, rest)
    w_in, s_in = _stable_mask(wg, rest & ~g.adj[v])
    w_in += wg.weights[v]
    s_in = (v,) + s_in
    # Heavier wins; among equal weights the lexicographically smaller tuple.
    if w_in > w_out or (w_in == w_out and s_in < s_out):
        value = (w_in, s_in)
    else:
        value = (w_out, s_out)
    memo[mask] = value
    return value


def max_weight_stable_set(
    wg: WeightedGraph, vertices: Iterable[int] | None = None
) -> tuple[frozenset[int], Fraction]:
    """Maximum-weight stable set of the subgraph induced on ``vertices``.

    Ties are broken towards the lexicographically smallest sorted vertex tuple.
    """
    g = wg.graph
    mask = g.full_mask if vertices is None else to_mask(vertices)
    if mask & ~g.full_mask:
        raise MalformedInputError("vertex set is not a subset of the graph's vertices", code="vertex")
    weight, members = _stable_mask(wg, mask)
    return frozenset(members), weight


def _check_bound(g: Graph, bound: int) -> None:
    if g.n > bound:
        raise ResourceBoundError(
            f"graph has {g.n} vertices, above the exhaustive-check bound {bound}; "
            "raise the bound explicitly to run anyway"
        )


def _masks_by_size(n: int) -> list[int]:
    masks = list(range(1, 1 << n))
    masks.sort(key=lambda m: (bin(m).count("1"), sorted(from_mask(m))))
    return masks


def is_perfect(g: Graph, bound: int = DEFAULT_BOUND) -> PerfectionReport:
    """Check omega == chi on every nonempty induced subgraph.

    Subsets are scanned by increasing size, so a reported witness is a
    smallest imperfect induced subgraph.
    """
    _check_bound(g, bound)
    omega, chi = clique_number(g), chromatic_number(g)
    for mask in _masks_by_size(g.n):
        w, c = _clique_number_mask(g, mask), _chromatic_number_mask(g, mask)
        if w != c:
            return PerfectionReport(False, omega, chi, from_mask(mask), w, c)
    return PerfectionReport(True, omega, chi)


def _shortest_odd_hole(g: Graph) -> tuple[int, ...] | None:
    adj = g.adj
    best: tuple[int, ...] | None = None

    def consider(cycle: list[int]) -> None:
        nonlocal best
        if len(cycle) < 5 or len(cycle) % 2 == 0:
            return
        if cycle[1] > cycle[-1]:
            cycle = [cycle[0]] + cycle[:0:-1]
        cand = tuple(cycle)
        if best is None or (len(cand), cand) < (len(best), best):
            best = cand

    def extend(path: list[int], path_mask: int, s: int) -> None:
        last = path[-1]
        inner = path_mask & ~(1 << last) & ~(1 << s)
        options = adj[last] & ~path_mask
        while options:
            u = _low(options)
            options &= ~(1 << u)
            if u < s or adj[u] & inner:
                continue
            if adj[u] >> s & 1:
                if len(path) >= 2:
                    consider(path + [u])
                elif len(path) == 1:
                    extend(path + [u], path_mask | 1 << u, s)
                continue
            extend(path + [u], path_mask | 1 << u, s)

    for s in range(g.n):
        extend([s], 1 << s, s)
    return best


def find_odd_hole_or_antihole(g: Graph, bound: int = DEFAULT_BOUND) -> OddHole | None:
    """Shortest induced odd cycle of length >= 5 in ``g``, else in its complement."""
    _check_bound(g, bound)
    hole = _shortest_odd_hole(g)
    if hole is not None:
        return OddHole("hole", hole)
    antihole = _shortest_odd_hole(complement(g))
    if antihole is not None:
        return OddHole("antihole", antihole)
    return None
