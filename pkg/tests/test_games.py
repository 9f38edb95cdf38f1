import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from coregames.errors import ContractError, MalformedInputError
from coregames.games import (
    AgentImputation,
    AssignmentGame,
    CliqueGame,
    MatroidGame,
    PackingGame,
    SatisfactionImputation,
    StableSetGame,
    allocate_top_down,
    build_lps,
    check_dual_optimality,
    coalitions,
    equivalence_audit,
    satisfaction,
    solve_dual_core,
    tdi_witness,
    verify_core_membership,
    witness_imputation,
    worth,
)
from coregames.graphs import Graph, WeightedGraph, complement
from coregames.matroids import UniformMatroid, WeightedMatroid
from coregames.random_instances import (
    MATROID_KINDS,
    random_assignment_game,
    random_graph,
    random_matroid_game,
    random_perfect_graph,
    random_weighted_graph,
)

ZERO = Fraction(0)


def single_edge(w=5):
    return AssignmentGame.from_edges([0], [1], [(0, 1)], [w])


def stable(g, weights=None):
    return StableSetGame(WeightedGraph(g, weights))


C4 = Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
C5 = Graph.cycle(5)
K3 = Graph.complete(3)
U32 = MatroidGame(WeightedMatroid(UniformMatroid(3, 2), [5, 3, 2]))


def oracle_in_core(game, imp):
    """Core membership straight from the definition, using oracle worths."""
    n = game.n_agents
    if isinstance(game, AssignmentGame):
        value = lambda T: oracles.max_matching_weight(game.edges, game.weights, T)
        share = lambda T: sum((imp[a] for a in T), ZERO)
    elif isinstance(game, StableSetGame):
        g = game.graph
        value = lambda T: oracles.max_stable_weight(g.n, sorted(g.edges), game.wgraph.weights, T)
        share = lambda T: sum((y for S, y in imp.support.items() if S & T), ZERO)
    else:
        m = game.wmatroid.matroid
        indep = {S for S in oracles.subsets(range(n)) if m.rank(S) == len(S)}
        value = lambda T: oracles.max_weight_independent(indep, game.wmatroid.weights, T)
        share = lambda T: sum((oracles.rank(indep, S & T) * y for S, y in imp.support.items()), ZERO)
    full = frozenset(range(n))
    if share(full) != value(full):
        return False
    return all(share(frozenset(T)) >= value(frozenset(T)) for r in range(1, n) for T in itertools.combinations(range(n), r))


# -- construction -------------------------------------------------------------------


def test_assignment_rejects_non_bipartite_edges():
    with pytest.raises(MalformedInputError) as info:
        AssignmentGame.from_edges([0, 1], [2], [(0, 1)], [1])
    assert info.value.code == "non-bipartite"


def test_packing_rejects_non_binary_matrix():
    with pytest.raises(MalformedInputError) as info:
        PackingGame([[1, 2]], [1, 1])
    assert info.value.code == "non-binary-matrix"


def test_worth_examples():
    g = single_edge()
    assert worth(g, {0}) == 0 and worth(g, {0, 1}) == 5
    assert worth(stable(C5)) == 2
    assert worth(U32) == 8
    assert worth(g, set()) == 0


def test_lp_shapes():
    lps = build_lps(single_edge())
    assert (lps.primal.n_vars, lps.primal.n_rows) == (1, 2)
    assert (lps.dual.n_vars, lps.dual.n_rows) == (2, 1)
    lps = build_lps(stable(C4))
    assert (lps.primal.n_vars, lps.primal.n_rows) == (4, 4)
    assert (lps.dual.n_vars, lps.dual.n_rows) == (4, 4)
    lps = build_lps(U32)
    assert lps.primal.n_rows == 7 and lps.dual.n_vars == 7


def test_dual_core_examples():
    imp = solve_dual_core(single_edge())
    assert imp.total == 5
    assert solve_dual_core(stable(K3)).support == {frozenset({0, 1, 2}): 1}
    y = solve_dual_core(U32)
    assert sum((U32.object_cost(S) * v for S, v in y.support.items()), ZERO) == 8
    assert check_dual_optimality(U32, y).optimal


def test_matroid_dual_from_the_worked_example():
    y = SatisfactionImputation({frozenset({0}): 2, frozenset({0, 1, 2}): 3})
    assert check_dual_optimality(U32, y).optimal
    assert verify_core_membership(U32, y).in_core
    # Counting each set once would pay the grand coalition 5, not its worth 8.
    assert y.total == 5


# -- allocation ----------------------------------------------------------------------


def test_top_down_examples():
    a, b, c = 0, 1, 2
    assert allocate_top_down(SatisfactionImputation({(a, b, c): 1}), {a, b}).sub_support == {frozenset({a, b}): 1}
    assert allocate_top_down(SatisfactionImputation({(a, b): 1, (b, c): 1}), {b}).sub_support == {frozenset({b}): 2}
    y = SatisfactionImputation({(a, b): 1})
    assert allocate_top_down(y, {c}).sub_support == {}
    assert satisfaction(y, {c}) == 0


def test_satisfaction_examples():
    assert satisfaction(SatisfactionImputation({(0, 1, 2): 1}), range(3)) == 1
    assert satisfaction(SatisfactionImputation({(0, 1): 1, (1, 2): 1}), {0, 2}) == 2
    cover = SatisfactionImputation({(0, 1): 1, (2, 3): 1, (3, 4): 1})
    assert satisfaction(cover, range(5)) == 3


def test_imputation_validation():
    with pytest.raises(MalformedInputError):
        SatisfactionImputation({(): 1})
    with pytest.raises(MalformedInputError):
        SatisfactionImputation({(0,): -1})
    with pytest.raises(MalformedInputError):
        SatisfactionImputation({(0, 1): 1, (1, 0): 2})
    with pytest.raises(MalformedInputError):
        AgentImputation({0: -1})


supports = st.dictionaries(
    st.frozensets(st.integers(min_value=0, max_value=5), min_size=1),
    st.fractions(min_value=0, max_value=5, max_denominator=6),
    max_size=6,
)


@settings(max_examples=100, deadline=None)
@given(supports, st.frozensets(st.integers(min_value=0, max_value=5)), st.frozensets(st.integers(min_value=0, max_value=5)))
def test_allocation_identities(support, T, extra):
    y = SatisfactionImputation(support)
    direct = sum((v for S, v in y.support.items() if S & T), ZERO)
    assert satisfaction(y, T) == direct == allocate_top_down(y, T).total()
    assert all(S <= T for S in allocate_top_down(y, T).sub_support)
    assert satisfaction(y, T) <= satisfaction(y, T | extra)
    for v in T:
        assert satisfaction(y, {v}) == y.coverage(v)


# -- core verification ----------------------------------------------------------------


def test_core_examples():
    report = verify_core_membership(single_edge(), AgentImputation({0: 5}))
    assert report.in_core and report.coalitions_checked == 3
    two = AssignmentGame.from_edges([0, 2], [1, 3], [(0, 1), (2, 3)], [3, 3])
    report = verify_core_membership(two, AgentImputation({0: 3, 1: 3}))
    assert not report.in_core
    assert [(set(v.coalition), v.worth, v.allocated) for v in report.violations] == [({2, 3}, 3, 0)]
    assert verify_core_membership(stable(K3), SatisfactionImputation({(0, 1, 2): 1})).in_core


def test_c5_dual_optimum_is_not_in_the_core():
    game = stable(C5)
    y = solve_dual_core(game)
    report = verify_core_membership(game, y)
    assert report.satisfaction_total == Fraction(5, 2) and report.worth_total == 2
    assert not report.in_core and not report.total_matches


def test_non_maximal_clique_keys_are_accepted():
    # path 0-1-2: {0} sits inside the maximal clique {0,1}, which also carries weight
    game = stable(Graph(3, [(0, 1), (1, 2)]))
    y = SatisfactionImputation({(0,): Fraction(1, 2), (0, 1): Fraction(1, 2), (1, 2): 1})
    assert verify_core_membership(game, y).in_core
    assert check_dual_optimality(game, y).optimal


def test_wrong_imputation_kind_is_a_contract_error():
    with pytest.raises(ContractError):
        verify_core_membership(stable(K3), AgentImputation({0: 1}))
    with pytest.raises(ContractError):
        verify_core_membership(stable(C4), SatisfactionImputation({(0, 2): 1}))


def test_violations_are_sorted():
    two = AssignmentGame.from_edges([0, 2], [1, 3], [(0, 1), (2, 3)], [3, 3])
    report = verify_core_membership(two, AgentImputation({}))
    keys = [sorted(v.coalition) for v in report.violations]
    assert keys == sorted(keys)


# -- TDI -------------------------------------------------------------------------------


def test_tdi_examples():
    w = tdi_witness(stable(C4))
    assert w.found and w.objective_value == 2
    y = witness_imputation(stable(C4), w)
    assert set(y.support) in ({frozenset({0, 1}), frozenset({2, 3})}, {frozenset({1, 2}), frozenset({0, 3})})
    w = tdi_witness(stable(C5))
    assert not w.found and "hypothesis-violated:perfect-graph" in w.flags
    w = tdi_witness(U32)
    assert w.found and w.objective_value == 8
    assert verify_core_membership(U32, witness_imputation(U32, w)).in_core


def test_tdi_needs_integral_weights():
    with pytest.raises(ContractError):
        tdi_witness(stable(C4, [Fraction(1, 2)] * 4))


# -- audits ----------------------------------------------------------------------------


def test_audit_examples():
    g = single_edge()
    imp = AgentImputation({0: 2, 1: 3})
    assert check_dual_optimality(g, imp).optimal and verify_core_membership(g, imp).in_core
    path = AssignmentGame.from_edges([0], [1, 2], [(0, 1), (0, 2)], [3, 2])
    imp = AgentImputation({1: 3})
    report = verify_core_membership(path, imp)
    assert frozenset({0, 2}) in [v.coalition for v in report.violations]
    assert check_dual_optimality(path, imp).uncovered == ((0, 2),)
    c5 = equivalence_audit(stable(C5), trials=12)
    assert c5.hypothesis_holds is False and not c5.forward_in_core


def test_audit_is_reproducible():
    game = random_assignment_game(random.Random(4))
    assert equivalence_audit(game, 20, seed=9) == equivalence_audit(game, 20, seed=9)


def test_packing_game_with_integral_relaxation():
    # three agents, columns = the two edges of a path
    game = PackingGame([[1, 0], [1, 1], [0, 1]], [2, 3])
    assert game.hypothesis().holds
    report = equivalence_audit(game, trials=20)
    assert report.consistent and report.forward_in_core


def test_packing_triangle_breaks_the_hypothesis():
    game = PackingGame([[1, 0, 1], [1, 1, 0], [0, 1, 1]], [1, 1, 1])
    assert worth(game) == 1
    assert not game.hypothesis().holds
    assert not verify_core_membership(game, solve_dual_core(game)).in_core


# -- oracle cross-checks -----------------------------------------------------------------


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=2**32))
def test_assignment_worth_and_core(seed):
    game = random_assignment_game(random.Random(seed), max_side=3)
    for _, T in coalitions(game.n_agents, proper=False):
        assert game.worth(T) == oracles.max_matching_weight(game.edges, game.weights, T)
    imp = solve_dual_core(game)
    assert verify_core_membership(game, imp).in_core
    assert oracle_in_core(game, imp)
    assert all(x in (0, 1) for x in game.primal_solution.primal)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=2**32))
def test_stable_set_on_perfect_graphs(seed):
    rng = random.Random(seed)
    _, g = random_perfect_graph(rng, rng.randint(1, 6))
    game = StableSetGame(random_weighted_graph(rng, g))
    y = solve_dual_core(game)
    assert verify_core_membership(game, y).in_core
    assert oracle_in_core(game, y)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=2**32), st.sampled_from(MATROID_KINDS))
def test_matroid_core(seed, kind):
    rng = random.Random(seed)
    game = random_matroid_game(rng, kind, rng.randint(1, 5))
    y = solve_dual_core(game)
    assert verify_core_membership(game, y).in_core
    assert oracle_in_core(game, y)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=2**32))
def test_clique_game_is_stable_game_on_complement(seed):
    rng = random.Random(seed)
    g = random_graph(rng, rng.randint(1, 6))
    wg = random_weighted_graph(rng, g)
    clique = CliqueGame(wg)
    other = StableSetGame(WeightedGraph(complement(g), wg.weights))
    for _, T in coalitions(g.n, proper=False):
        assert clique.worth(T) == other.worth(T)
        assert clique.worth(T) == oracles.max_clique_weight(g.n, sorted(g.edges), wg.weights, T)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=2**32))
def test_packing_worth(seed):
    rng = random.Random(seed)
    n, m = rng.randint(1, 4), rng.randint(1, 5)
    matrix = [[int(rng.random() < 0.4) for _ in range(m)] for _ in range(n)]
    for j in range(m):
        if not any(row[j] for row in matrix):
            matrix[rng.randrange(n)][j] = 1
    weights = [rng.randint(0, 6) for _ in range(m)]
    game = PackingGame(matrix, weights)
    for _, T in coalitions(n, proper=False):
        assert game.worth(T) == oracles.max_packing_weight(matrix, weights, T)
    report = equivalence_audit(game, trials=8, seed=seed % 1000)
    if game.hypothesis().holds:
        assert report.consistent and report.forward_in_core
