"""Matroids given by rank oracles, the greedy algorithm, and axiom checks.

Elements of a matroid on ``n`` elements are the integers ``0..n-1``.  For a
graphic matroid, element ``i`` is the ``i``-th edge of the host graph in
sorted order.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

from .errors import ContractError, MalformedInputError, ResourceBoundError
from .graphs import Graph, from_mask, to_mask
from .rational import as_rational

DEFAULT_BOUND = 10


class Matroid:
    """Base class; subclasses implement ``_rank_mask``."""

    kind: str = ""

    @property
    def ground_size(self) -> int:
        raise NotImplementedError

    def _rank_mask(self, mask: int) -> int:
        raise NotImplementedError

    @cached_property
    def _rank_cache(self) -> dict[int, int]:
        return {}

    def rank_mask(self, mask: int) -> int:
        cache = self._rank_cache
        if mask not in cache:
            cache[mask] = self._rank_mask(mask)
        return cache[mask]

    def rank(self, elements: Iterable[int]) -> int:
        elements = list(elements)
        for e in elements:
            if not isinstance(e, int) or not 0 <= e < self.ground_size:
                raise MalformedInputError(
                    f"element {e!r} outside ground set 0..{self.ground_size - 1}", code="element"
                )
        return self.rank_mask(to_mask(elements))

    def is_independent(self, elements: Iterable[int]) -> bool:
        elements = set(elements)
        return self.rank(elements) == len(elements)

    def loops(self) -> frozenset[int]:
        return frozenset(e for e in range(self.ground_size) if self.rank_mask(1 << e) == 0)


@dataclass(frozen=True, eq=True)
class UniformMatroid(Matroid):
    n: int
    k: int
    kind = "uniform"

    def __post_init__(self):
        if self.n < 0 or not 0 <= self.k:
            raise MalformedInputError(f"uniform matroid needs n >= 0 and k >= 0, got n={self.n}, k={self.k}", code="matroid")

    @property
    def ground_size(self) -> int:
        return self.n

    def _rank_mask(self, mask: int) -> int:
        return min(bin(mask).count("1"), self.k)


@dataclass(frozen=True, eq=True)
class GraphicMatroid(Matroid):
    graph: Graph
    kind = "graphic"

    @cached_property
    def elements(self) -> list[tuple[int, int]]:
        return self.graph.sorted_edges()

    @property
    def ground_size(self) -> int:
        return len(self.graph.edges)

    def _rank_mask(self, mask: int) -> int:
        parent = list(range(self.graph.n))

        def find(v: int) -> int:
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        merged = 0
        for e in from_mask(mask):
            u, v = self.elements[e]
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
                merged += 1
        return merged


@dataclass(frozen=True, eq=True)
class PartitionMatroid(Matroid):
    blocks: tuple
    capacities: tuple
    kind = "partition"

    def __post_init__(self):
        blocks = tuple(tuple(sorted(b)) for b in self.blocks)
        capacities = tuple(self.capacities)
        if len(blocks) != len(capacities):
            raise MalformedInputError(f"{len(blocks)} blocks but {len(capacities)} capacities", code="matroid")
        if any(not isinstance(c, int) or c < 0 for c in capacities):
            raise MalformedInputError("capacities must be natural numbers", code="matroid")
        flat = sorted(e for b in blocks for e in b)
        if flat != list(range(len(flat))):
            raise MalformedInputError("blocks must partition 0..n-1", code="matroid")
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "capacities", capacities)

    @property
    def ground_size(self) -> int:
        return sum(len(b) for b in self.blocks)

    def _rank_mask(self, mask: int) -> int:
        return sum(
            min(sum(1 for e in block if mask >> e & 1), cap) for block, cap in zip(self.blocks, self.capacities)
        )


@dataclass(frozen=True, eq=True)
class ExplicitMatroid(Matroid):
    """Matroid given by its list of independent sets (untrusted until verified)."""

    n: int
    independent: frozenset
    kind = "explicit"

    def __post_init__(self):
        sets = set()
        for s in self.independent:
            s = frozenset(s)
            if any(not isinstance(e, int) or not 0 <= e < self.n for e in s):
                raise MalformedInputError(f"independent set {sorted(s)} leaves 0..{self.n - 1}", code="element")
            sets.add(s)
        object.__setattr__(self, "independent", frozenset(sets))

    @property
    def ground_size(self) -> int:
        return self.n

    @cached_property
    def _masks(self) -> list[int]:
        return [to_mask(s) for s in self.independent]

    def _rank_mask(self, mask: int) -> int:
        return max((bin(m).count("1") for m in self._masks if m & ~mask == 0), default=0)


@dataclass(frozen=True)
class WeightedMatroid:
    matroid: Matroid
    weights: tuple = None

    def __post_init__(self):
        n = self.matroid.ground_size
        weights = (Fraction(1),) * n if self.weights is None else tuple(as_rational(w) for w in self.weights)
        if len(weights) != n:
            raise MalformedInputError(f"{len(weights)} weights for {n} elements", code="dimension")
        for e, w in enumerate(weights):
            if w < 0:
                raise MalformedInputError(f"element {e} has negative weight {w}", code="negative-weight")
        object.__setattr__(self, "weights", weights)


@dataclass(frozen=True)
class AxiomReport:
    ok: bool
    violation: str | None = None
    witness: tuple[tuple[int, ...], ...] = ()
    subsets_checked: int = 0


def _fmt(mask_or_set) -> tuple[int, ...]:
    if isinstance(mask_or_set, int):
        return tuple(sorted(from_mask(mask_or_set)))
    return tuple(sorted(mask_or_set))


def _check_explicit(m: ExplicitMatroid) -> AxiomReport | None:
    sets = m.independent
    if frozenset() not in sets:
        return AxiomReport(False, "the empty set is not listed as independent", ((),))
    for s in sorted(sets, key=lambda s: (len(s), sorted(s))):
        missing = sorted((s - {e} for e in s if s - {e} not in sets), key=sorted)
        if missing:
            sub = missing[0]
            return AxiomReport(
                False, f"not downward closed: {_fmt(sub)} missing (subset of {_fmt(s)})", (_fmt(sub), _fmt(s))
            )
    ordered = sorted(sets, key=lambda s: (len(s), sorted(s)))
    for small in ordered:
        for big in ordered:
            if len(small) < len(big) and not any(small | {e} in sets for e in big - small):
                return AxiomReport(
                    False, f"exchange fails: no element of {_fmt(big)} extends {_fmt(small)}", (_fmt(small), _fmt(big))
                )
    return None


@lru_cache(maxsize=512)
def _verify(m: Matroid, bound: int) -> AxiomReport:
    n = m.ground_size
    if n > bound:
        raise ResourceBoundError(f"ground set has {n} elements, above the axiom-check bound {bound}")
    if isinstance(m, ExplicitMatroid):
        bad = _check_explicit(m)
        if bad is not None:
            return bad
    full = 1 << n
    r = [m.rank_mask(mask) for mask in range(full)]
    if r[0] != 0:
        return AxiomReport(False, f"rank of the empty set is {r[0]}", ((),), 1)
    for mask in range(full):
        size = bin(mask).count("1")
        if not 0 <= r[mask] <= size:
            return AxiomReport(False, f"rank {r[mask]} outside [0, {size}]", (_fmt(mask),), mask + 1)
        for e in range(n):
            bit = 1 << e
            if mask & bit:
                continue
            if r[mask | bit] < r[mask]:
                return AxiomReport(False, "rank not monotone", (_fmt(mask), _fmt(mask | bit)), mask + 1)
            if r[mask | bit] > r[mask] + 1:
                return AxiomReport(False, "rank grows by more than one", (_fmt(mask), _fmt(mask | bit)), mask + 1)
    for s in range(full):
        for t in range(s, full):
            if r[s] + r[t] < r[s & t] + r[s | t]:
                return AxiomReport(False, "rank not submodular", (_fmt(s), _fmt(t)), full)
    return AxiomReport(True, subsets_checked=full)


def verify_rank_axioms(m: Matroid, bound: int = DEFAULT_BOUND) -> AxiomReport:
    """Exhaustively check the rank axioms (and, for explicit lists, the independence axioms)."""
    return _verify(m, bound)


def greedy(m: Matroid, weights: Sequence[Fraction], elements: Iterable[int] | None = None):
    """Greedy maximum-weight independent subset of ``elements`` (default: all).

    Elements are scanned by decreasing weight, ties by index, and each one is
    picked exactly when it raises the rank of the scanned prefix.
    """
    pool = range(m.ground_size) if elements is None else elements
    order = sorted(pool, key=lambda e: (-weights[e], e))
    picked = []
    prefix = 0
    prefix_rank = 0
    for e in order:
        prefix |= 1 << e
        rank = m.rank_mask(prefix)
        if rank > prefix_rank:
            picked.append(e)
        prefix_rank = rank
    return frozenset(picked), sum((weights[e] for e in picked), Fraction(0))


def greedy_max_weight_independent(
    wm: WeightedMatroid, check_axioms: bool = True, bound: int = DEFAULT_BOUND
) -> tuple[frozenset[int], Fraction]:
    m = wm.matroid
    # Built-in kinds are matroids by construction; only large ones skip the check.
    if check_axioms and (m.ground_size <= bound or isinstance(m, ExplicitMatroid)):
        report = verify_rank_axioms(m, bound)
        if not report.ok:
            raise ContractError(f"not a matroid: {report.violation}")
    return greedy(wm.matroid, wm.weights)


def brute_force_max_weight_independent(
    wm: WeightedMatroid, bound: int = DEFAULT_BOUND
) -> tuple[frozenset[int], Fraction]:
    m = wm.matroid
    n = m.ground_size
    if n > bound:
        raise ResourceBoundError(f"ground set has {n} elements, above the brute-force bound {bound}")
    best, best_weight = 0, Fraction(0)
    for mask in range(1 << n):
        members = from_mask(mask)
        if m.rank_mask(mask) != len(members):
            continue
        weight = sum((wm.weights[e] for e in members), Fraction(0))
        if weight > best_weight:
            best, best_weight = mask, weight
    return from_mask(best), best_weight


def restriction_worth(wm: WeightedMatroid, elements: Iterable[int]) -> Fraction:
    """Weight of a maximum-weight independent subset of ``elements``."""
    return greedy(wm.matroid, wm.weights, elements)[1]


def nonempty_subsets(n: int) -> list[frozenset[int]]:
    """All nonempty subsets of ``0..n-1`` ordered by size, then lexicographically."""
    return [frozenset(c) for k in range(1, n + 1) for c in itertools.combinations(range(n), k)]
