"""Imputation objects and the top-down allocation of satisfaction."""

from __future__ import annotations

from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction

from ..errors import MalformedInputError
from ..rational import as_rational

_ZERO = Fraction(0)


@dataclass(frozen=True)
class AgentImputation:
    """Payoff per agent; absent agents are paid zero."""

    payoffs: Mapping[int, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for agent, value in self.payoffs.items():
            value = as_rational(value)
            if value < 0:
                raise MalformedInputError(f"agent {agent} has negative payoff {value}", code="negative-payoff")
            if value:
                clean[int(agent)] = value
        object.__setattr__(self, "payoffs", dict(sorted(clean.items())))

    def __getitem__(self, agent: int) -> Fraction:
        return self.payoffs.get(agent, _ZERO)

    @property
    def total(self) -> Fraction:
        return sum(self.payoffs.values(), _ZERO)

    def allocation(self, T: Iterable[int]) -> Fraction:
        """Bottom-up: a coalition receives the sum of its members' payoffs."""
        return sum((self[a] for a in T), _ZERO)


@dataclass(frozen=True)
class SatisfactionImputation:
    """Sparse map from object sets (cliques, subsets) to nonnegative satisfaction."""

    support: Mapping[frozenset, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean: dict[frozenset[int], Fraction] = {}
        for key, value in self.support.items():
            key = frozenset(key)
            value = as_rational(value)
            if not key:
                raise MalformedInputError("the empty set cannot carry satisfaction", code="empty-object")
            if value < 0:
                raise MalformedInputError(f"set {sorted(key)} has negative satisfaction {value}", code="negative-payoff")
            if key in clean:
                raise MalformedInputError(f"set {sorted(key)} listed twice", code="duplicate-key")
            if value:
                clean[key] = value
        object.__setattr__(self, "support", dict(sorted(clean.items(), key=lambda kv: sorted(kv[0]))))

    def __getitem__(self, key: Iterable[int]) -> Fraction:
        return self.support.get(frozenset(key), _ZERO)

    @property
    def total(self) -> Fraction:
        return sum(self.support.values(), _ZERO)

    def coverage(self, agent: int) -> Fraction:
        """Satisfaction of all sets containing ``agent``."""
        return sum((y for S, y in self.support.items() if agent in S), _ZERO)


@dataclass(frozen=True)
class Allocation:
    """Satisfaction passed down to subsets of a sub-coalition."""

    coalition: frozenset[int]
    sub_support: Mapping[frozenset, Fraction]

    def total(self, weight: Callable[[frozenset], Fraction] | None = None) -> Fraction:
        if weight is None:
            return sum(self.sub_support.values(), _ZERO)
        return sum((weight(S) * z for S, z in self.sub_support.items()), _ZERO)


def allocate_top_down(y: SatisfactionImputation, T: Iterable[int]) -> Allocation:
    """Each set ``S`` hands ``y_S`` to ``S & T``; sets missing ``T`` hand nothing."""
    T = frozenset(T)
    z: dict[frozenset[int], Fraction] = {}
    for S, value in y.support.items():
        sub = S & T
        if sub:
            z[sub] = z.get(sub, _ZERO) + value
    return Allocation(T, dict(sorted(z.items(), key=lambda kv: sorted(kv[0]))))


def satisfaction(
    y: SatisfactionImputation,
    T: Iterable[int],
    weight: Callable[[frozenset], Fraction] | None = None,
) -> Fraction:
    """Total satisfaction a coalition inherits under top-down allocation.

    Without ``weight`` every allocated set counts once, giving
    ``sum(y_S for S meeting T)``.  With ``weight`` (e.g. a matroid rank), each
    allocated set ``S & T`` counts ``weight(S & T)`` times.
    """
    return allocate_top_down(y, T).total(weight)
