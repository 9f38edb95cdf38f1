"""Core imputations from LP duals, brute-force core checks and audits."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from ..errors import ContractError, ResourceBoundError
from ..lp import LE, MINIMIZE, OPTIMAL, IntegralDualWitness, LinearProgram, find_integral_dual, solve_lp
from .allocation import AgentImputation, SatisfactionImputation, satisfaction
from .instances import AGENT, AgentGame, Game, SatisfactionGame, coalitions

DEFAULT_VERIFY_BOUND = 10

_ZERO = Fraction(0)

Imputation = AgentImputation | SatisfactionImputation


def solve_dual_core(game: Game) -> Imputation:
    """Optimal dual of the game's relaxation, packaged as an imputation."""
    sol = game.primal_solution
    if sol.status != OPTIMAL:
        raise ContractError(f"primal relaxation is {sol.status}")
    objects = game.lps.objects
    if isinstance(game, AgentGame):
        return AgentImputation({a: y for a, y in zip(objects, sol.dual)})
    return SatisfactionImputation({S: y for S, y in zip(objects, sol.dual) if y})


def _check_type(game: Game, imp: Imputation) -> None:
    expected = AgentImputation if game.imputation_type == AGENT else SatisfactionImputation
    if not isinstance(imp, expected):
        raise ContractError(f"{game.kind} games take {expected.__name__}, got {type(imp).__name__}")
    if isinstance(imp, AgentImputation):
        bad = [a for a in imp.payoffs if not 0 <= a < game.n_agents]
        if bad:
            raise ContractError(f"payoffs to unknown agents {bad}")
    else:
        bad = [sorted(S) for S in imp.support if not game.is_object(S)]
        if bad:
            raise ContractError(f"sets {bad} cannot carry satisfaction in a {game.kind} game")


def allocated(game: Game, imp: Imputation, T) -> Fraction:
    """What coalition ``T`` receives: member sum, or top-down satisfaction."""
    if isinstance(imp, AgentImputation):
        return imp.allocation(T)
    return satisfaction(imp, T, game.object_cost)


@dataclass(frozen=True)
class CoreViolation:
    coalition: frozenset[int]
    worth: Fraction
    allocated: Fraction


@dataclass(frozen=True)
class CoreReport:
    in_core: bool
    worth_total: Fraction
    satisfaction_total: Fraction
    violations: tuple[CoreViolation, ...]
    coalitions_checked: int

    @property
    def total_matches(self) -> bool:
        return self.worth_total == self.satisfaction_total


def verify_core_membership(
    game: Game,
    imp: Imputation,
    bound: int = DEFAULT_VERIFY_BOUND,
    stop_at_first: bool = False,
) -> CoreReport:
    """Check the grand-coalition total and every nonempty proper coalition by enumeration.

    ``coalitions_checked`` counts the grand coalition too, so a full run on
    ``n`` agents reports ``2**n - 1``.
    """
    n = game.n_agents
    if n > bound:
        raise ResourceBoundError(f"{n} agents means 2^{n} coalitions; above the bound {bound}")
    _check_type(game, imp)
    worth_total = game.worth()
    sat_total = allocated(game, imp, game.grand_coalition)
    checked = 1
    violations = []
    for _, T in coalitions(n):
        checked += 1
        w = game.worth(T)
        got = allocated(game, imp, T)
        if w > got:
            violations.append(CoreViolation(T, w, got))
            if stop_at_first:
                break
    violations.sort(key=lambda v: sorted(v.coalition))
    return CoreReport(
        in_core=not violations and worth_total == sat_total,
        worth_total=worth_total,
        satisfaction_total=sat_total,
        violations=tuple(violations),
        coalitions_checked=checked,
    )


@dataclass(frozen=True)
class DualCheck:
    feasible: bool
    objective: Fraction
    worth: Fraction
    uncovered: tuple = ()

    @property
    def optimal(self) -> bool:
        """Dual feasible with objective equal to the grand coalition's worth."""
        return self.feasible and self.objective == self.worth


def check_dual_optimality(game: Game, imp: Imputation) -> DualCheck:
    """Evaluate an imputation as a point of the game's dual LP."""
    _check_type(game, imp)
    uncovered = []
    if isinstance(game, AgentGame):
        for support, w in game.object_supports():
            if imp.allocation(support) < w:
                uncovered.append(tuple(sorted(support)))
        objective = imp.total
    else:
        for agent, w in enumerate(game.agent_weights()):
            if imp.coverage(agent) < w:
                uncovered.append(agent)
        objective = sum((game.object_cost(S) * y for S, y in imp.support.items()), _ZERO)
    return DualCheck(not uncovered, objective, game.worth(), tuple(uncovered))


def tdi_witness(game: Game) -> IntegralDualWitness:
    """Search for an integral optimal dual; integral weights are required."""
    weights = _game_weights(game)
    if any(w.denominator != 1 for w in weights):
        raise ContractError("integral-dual search needs integral weights")
    sol = game.primal_solution
    if sol.status != OPTIMAL:
        raise ContractError(f"primal relaxation is {sol.status}")
    witness = find_integral_dual(game.lps.dual, sol.value)
    hyp = game.hypothesis()
    flags = []
    if hyp.holds is False:
        flags.append(f"hypothesis-violated:{hyp.name}")
    elif hyp.holds is None:
        flags.append(f"hypothesis-unchecked:{hyp.name}")
    return IntegralDualWitness(witness.found, witness.assignment, witness.objective_value, witness.nodes_explored, tuple(flags))


def witness_imputation(game: Game, witness: IntegralDualWitness) -> Imputation | None:
    if not witness.found:
        return None
    objects = game.lps.objects
    if isinstance(game, AgentGame):
        return AgentImputation({a: y for a, y in zip(objects, witness.assignment)})
    return SatisfactionImputation({S: y for S, y in zip(objects, witness.assignment) if y})


def _game_weights(game: Game) -> tuple[Fraction, ...]:
    if isinstance(game, SatisfactionGame):
        return tuple(game.agent_weights())
    return tuple(w for _, w in game.object_supports())


# -- audits -------------------------------------------------------------------


@dataclass(frozen=True)
class AuditSample:
    imputation: Imputation
    in_core: bool
    dual_optimal: bool


@dataclass(frozen=True)
class AuditReport:
    kind: str
    trials: int
    seed: int
    worth: Fraction
    lp_optimum: Fraction
    hypothesis: str
    hypothesis_holds: bool | None
    forward_in_core: bool
    forward_dual_optimal: bool
    in_core_count: int
    dual_optimal_count: int
    agreements: int
    disagreements: tuple[AuditSample, ...] = field(default_factory=tuple)

    @property
    def consistent(self) -> bool:
        """No counterexample: samples agree and, under the hypothesis, the dual is in the core."""
        return not self.disagreements and (self.forward_in_core or self.hypothesis_holds is False)


def _scale(values: dict, costs: dict, total: Fraction) -> dict:
    mass = sum((costs[k] * v for k, v in values.items()), _ZERO)
    if not mass:
        return {}
    return {k: v * total / mass for k, v in values.items()}


def _mix(a: dict, b: dict, lam: Fraction) -> dict:
    keys = set(a) | set(b)
    return {k: lam * a.get(k, _ZERO) + (1 - lam) * b.get(k, _ZERO) for k in keys}


def _transfer(rng: random.Random, values: dict, costs: dict, pool: list) -> dict:
    """Move satisfaction from one key to another at constant cost-weighted total."""
    donors = sorted((k for k, v in values.items() if v > 0), key=_key_order)
    if not donors or len(pool) < 2:
        return dict(values)
    src = rng.choice(donors)
    dst = rng.choice([k for k in pool if k != src])
    amount = values[src] * Fraction(rng.randint(1, 4), 4)
    out = dict(values)
    out[src] -= amount
    out[dst] = out.get(dst, _ZERO) + amount * costs[src] / costs[dst]
    return out


def _key_order(k):
    return sorted(k) if isinstance(k, frozenset) else [k]


def _candidate_objects(game: Game, rng: random.Random) -> list:
    if isinstance(game, AgentGame):
        return list(range(game.n_agents))
    if game.kind == "matroid":
        return [S for _, S in coalitions(game.n_agents, proper=False) if game.object_cost(S) > 0]
    pool = set(game.lps.objects)
    for Q in game.lps.objects:
        members = sorted(Q)
        if len(members) > 1:
            pool.add(frozenset(rng.sample(members, rng.randint(1, len(members) - 1))))
    return sorted(pool, key=sorted)


def optimal_face_vertices(game: Game, rng: random.Random, count: int = 4) -> list[dict]:
    """Extra optimal dual vertices, found by re-solving over the optimal face.

    The dual LP gets one more row pinning its objective to the optimum, and
    is then minimised under random secondary objectives.
    """
    dual = game.lps.dual
    opt = game.primal_solution.value
    if not any(dual.objective):
        return []
    matrix = list(dual.matrix) + [dual.objective]
    rhs = list(dual.rhs) + [opt]
    senses = list(dual.senses) + [LE]
    found = []
    for _ in range(count):
        secondary = [rng.randint(-2, 5) for _ in dual.objective]
        sol = solve_lp(LinearProgram(MINIMIZE, secondary, matrix, rhs, senses))
        if sol.status != OPTIMAL:
            secondary = [abs(c) for c in secondary]
            sol = solve_lp(LinearProgram(MINIMIZE, secondary, matrix, rhs, senses))
        if sol.status == OPTIMAL:
            found.append({k: y for k, y in zip(game.lps.objects, sol.primal)})
    return found


def equivalence_audit(game: Game, trials: int = 50, seed: int = 0, bound: int = DEFAULT_VERIFY_BOUND) -> AuditReport:
    """Compare brute-force core membership with exact dual optimality on sampled imputations.

    Samples rotate through four shapes, all giving the grand coalition the
    LP optimum (which is its worth when the game's hypothesis holds): an
    independent random point scaled to the worth, a convex combination of a
    random point with an optimal dual, a random transfer away from an optimal
    dual, and a convex combination of two optimal dual vertices.  All
    randomness comes from ``random.Random(seed)``.
    """
    rng = random.Random(seed)
    worth = game.worth()
    star = solve_dual_core(game)
    forward = verify_core_membership(game, star, bound, stop_at_first=True)
    forward_dual = check_dual_optimality(game, star)
    hyp = game.hypothesis()

    agent_game = isinstance(game, AgentGame)
    if agent_game:
        star_map = {a: star[a] for a in range(game.n_agents)}
    else:
        star_map = dict(star.support)
    pool = _candidate_objects(game, rng)
    face = [star_map] + optimal_face_vertices(game, rng)
    cost_of = (lambda k: Fraction(1)) if agent_game else game.object_cost
    costs = {k: cost_of(k) for k in set(pool).union(*face)}

    def build(values: dict) -> Imputation:
        if agent_game:
            return AgentImputation(values)
        return SatisfactionImputation({k: v for k, v in values.items() if v})

    samples_in_core = samples_dual_opt = agree = 0
    disagreements = []
    for t in range(trials):
        if agent_game:
            raw = {k: Fraction(rng.randint(0, 12)) for k in pool}
        else:
            size = rng.randint(1, min(len(pool), game.n_agents + 1)) if pool else 0
            raw = {k: Fraction(rng.randint(1, 12)) for k in rng.sample(pool, size)}
        point = _scale(raw, costs, worth)
        if worth and not point:
            point = dict(star_map)
        shape = t % 4
        if shape == 1:
            point = _mix(rng.choice(face), point, Fraction(rng.randint(1, 8), 8))
        elif shape == 2:
            point = _transfer(rng, rng.choice(face), costs, pool)
        elif shape == 3:
            point = _mix(rng.choice(face), rng.choice(face), Fraction(rng.randint(0, 8), 8))
        imp = build(point)
        in_core = verify_core_membership(game, imp, bound, stop_at_first=True).in_core
        dual_opt = check_dual_optimality(game, imp).optimal
        samples_in_core += in_core
        samples_dual_opt += dual_opt
        if in_core == dual_opt:
            agree += 1
        else:
            disagreements.append(AuditSample(imp, in_core, dual_opt))

    return AuditReport(
        kind=game.kind,
        trials=trials,
        seed=seed,
        worth=worth,
        lp_optimum=game.primal_solution.value,
        hypothesis=hyp.name,
        hypothesis_holds=hyp.holds,
        forward_in_core=forward.in_core,
        forward_dual_optimal=forward_dual.optimal,
        in_core_count=samples_in_core,
        dual_optimal_count=samples_dual_opt,
        agreements=agree,
        disagreements=tuple(disagreements),
    )
