"""Ground-truth computations: Hamiltonicity, 2-connectivity, canonical
forms, the exact solver, and the exhaustive adversary."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from capgame.builder_strategy import BuilderPlayer
from capgame.avoider_strategy import AvoiderPlayer
from capgame.graph_core import GameGraph, add_edge, legal_moves
from capgame.oracle import (
    Objective,
    TooLarge,
    canonical_form,
    exhaust_adversary,
    hamilton_cycle,
    is_two_connected,
    solve,
)

from helpers import CUBE_EDGES, K4_EDGES, graph
from oracles import (
    brute_force_values,
    hamiltonian_by_permutations,
    naive_two_connected,
)

PETERSEN = [
    (0, 1), (1, 2), (2, 3), (3, 4), (4, 0),
    (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
    (5, 7), (7, 9), (9, 6), (6, 8), (8, 5),
]


def random_graph(rng, n, k=3, density=2):
    g = GameGraph.empty(n, k)
    for _ in range(rng.randrange(density * n)):
        moves = sorted(legal_moves(g))
        if not moves:
            break
        g = add_edge(g, moves[rng.randrange(len(moves))])
    return g


class TestHamiltonCycle:
    def test_k4(self):
        cyc = hamilton_cycle(graph(4, 3, K4_EDGES))
        assert cyc is not None and len(cyc) == 4

    def test_path_absent(self):
        assert hamilton_cycle(graph(4, 3, [(0, 1), (1, 2), (2, 3)])) is None

    def test_petersen_absent(self):
        assert hamilton_cycle(GameGraph.from_edges(10, 3, PETERSEN)) is None

    def test_cycle_is_valid(self):
        g = GameGraph.from_edges(8, 3, CUBE_EDGES)
        cyc = hamilton_cycle(g)
        assert cyc is not None and sorted(cyc) == list(range(8))
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            assert g.adjacent(a, b)

    def test_small_n(self):
        assert hamilton_cycle(GameGraph.empty(1, 3)) is None
        assert hamilton_cycle(graph(2, 3, [(0, 1)])) is None

    def test_agrees_with_permutation_oracle(self):
        rng = random.Random(3)
        for _ in range(300):
            g = random_graph(rng, rng.choice([4, 5, 6, 7]))
            assert (hamilton_cycle(g) is not None) == hamiltonian_by_permutations(g)


class TestTwoConnected:
    def test_triangle(self):
        assert is_two_connected(graph(3, 3, [(0, 1), (1, 2), (0, 2)]))

    def test_path_cut_vertex(self):
        assert not is_two_connected(graph(3, 3, [(0, 1), (1, 2)]))

    def test_disconnected(self):
        g = graph(6, 3, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
        assert not is_two_connected(g)

    def test_agrees_with_naive(self):
        rng = random.Random(4)
        for _ in range(300):
            g = random_graph(rng, rng.choice([3, 4, 5, 6, 7, 8]))
            assert is_two_connected(g) == naive_two_connected(g)


class TestCanonicalForm:
    def test_relabelled_path(self):
        a = graph(3, 3, [(0, 1), (1, 2)])
        b = graph(3, 3, [(2, 0), (0, 1)])
        assert canonical_form(a) == canonical_form(b)

    def test_path_vs_triangle(self):
        a = graph(3, 3, [(0, 1), (1, 2)])
        b = graph(3, 3, [(0, 1), (1, 2), (0, 2)])
        assert canonical_form(a) != canonical_form(b)

    def test_cube_two_labelings(self):
        a = GameGraph.from_edges(8, 3, CUBE_EDGES)
        perm = [3, 5, 0, 7, 2, 6, 1, 4]
        b = GameGraph.from_edges(8, 3, [(perm[u], perm[v]) for u, v in CUBE_EDGES])
        assert canonical_form(a) == canonical_form(b)

    def test_side_and_colors_distinguish(self):
        g = graph(3, 3, [(0, 1)])
        assert canonical_form(g, side=1) != canonical_form(g, side=2)
        assert canonical_form(g, colors={0: 1}) != canonical_form(g, colors={2: 1})

    def test_too_large(self):
        with pytest.raises(TooLarge):
            canonical_form(GameGraph.empty(9, 3))

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.permutations(list(range(6))))
    def test_relabeling_invariance(self, seed, perm):
        rng = random.Random(seed)
        g = random_graph(rng, 6)
        h = GameGraph.from_edges(6, 3, [(perm[u], perm[v]) for u, v in g.edges()])
        assert canonical_form(g) == canonical_form(h)

    def test_distinct_on_all_small_graphs(self):
        # exact keys: non-isomorphic graphs on 5 vertices get distinct keys
        # (spot-check by grouping all graphs by key and verifying sizes
        # against permutation-orbit sizes)
        import itertools

        from oracles import all_graphs_maxdeg3

        by_key = {}
        for g in all_graphs_maxdeg3(5):
            by_key.setdefault(canonical_form(g), []).append(g)
        for key, gs in by_key.items():
            base = gs[0]
            base_edges = set(map(tuple, base.edges()))
            orbit = set()
            for perm in itertools.permutations(range(5)):
                orbit.add(
                    frozenset(
                        (min(perm[u], perm[v]), max(perm[u], perm[v]))
                        for u, v in base_edges
                    )
                )
            assert len(gs) == len(orbit)


class TestSolve:
    def test_triangle_forced(self):
        res = solve(GameGraph.empty(3, 3), objective=Objective.FORCE_HAMILTONIAN)
        assert res.mover_wins
        # the pursuer moving second also wins: the opponent cannot avoid it
        res2 = solve(GameGraph.empty(3, 3), objective=Objective.AVOID_HAMILTONIAN)
        assert not res2.mover_wins

    def test_two_vertices_unattainable(self):
        res = solve(GameGraph.empty(2, 3), objective=Objective.FORCE_HAMILTONIAN)
        assert not res.mover_wins
        assert solve(GameGraph.empty(2, 3), objective=Objective.AVOID_HAMILTONIAN).mover_wins

    def test_k4_n4_forced_terminal(self):
        res = solve(GameGraph.empty(4, 4), objective=Objective.FORCE_HAMILTONIAN)
        assert res.mover_wins

    def test_principal_move_present_iff_moves_exist(self):
        res = solve(graph(4, 3, K4_EDGES), objective=Objective.FORCE_HAMILTONIAN)
        assert res.principal_move is None
        res2 = solve(GameGraph.empty(3, 3), objective=Objective.FORCE_HAMILTONIAN)
        assert res2.principal_move is not None

    def test_relabeling_symmetry(self):
        rng = random.Random(9)
        for _ in range(20):
            g = random_graph(rng, 5)
            perm = list(range(5))
            rng.shuffle(perm)
            h = GameGraph.from_edges(5, 3, [(perm[u], perm[v]) for u, v in g.edges()])
            for obj in Objective:
                assert solve(g, objective=obj).mover_wins == solve(h, objective=obj).mover_wins

    def test_matches_brute_force_tiny(self):
        # n <= 4 here; the full n <= 5 sweep runs in the acceptance suite
        for k in (3, 4):
            for n in (2, 3, 4):
                brute = brute_force_values(n, k)
                for obj in Objective:
                    got = solve(GameGraph.empty(n, k), objective=obj).mover_wins
                    assert got == brute[obj.value], (k, n, obj)

    def test_too_large(self):
        with pytest.raises(TooLarge):
            solve(GameGraph.empty(8, 3))


class TestExhaust:
    def test_builder_k4_n4_all_hamiltonian(self):
        rep = exhaust_adversary(BuilderPlayer(), "builder", GameGraph.empty(4, 4))
        assert rep.all_ok

    def test_avoider_n3_universal_failure(self):
        g0 = GameGraph.empty(3, 3)
        rep = exhaust_adversary(AvoiderPlayer.for_initial(g0), "avoider", g0)
        assert rep.successes == 0 and rep.failures
        # the terminal is always the triangle
        assert len(rep.terminal_classes) == 1

    def test_pruned_matches_unpruned(self):
        for first in ("strategy", "opponent"):
            full = exhaust_adversary(
                BuilderPlayer(),
                "builder",
                GameGraph.empty(5, 4),
                first=first,
                prune_isomorphic=False,
                early_stop=False,
            )
            pruned = exhaust_adversary(
                BuilderPlayer(), "builder", GameGraph.empty(5, 4), first=first
            )
            assert full.all_ok and pruned.all_ok

    def test_solver_backed_player_achieves_value(self):
        # play the solver's principal move at every turn: achieves the value
        from dataclasses import dataclass, replace as dc_replace
        from capgame.graph_core import StrategyDecision

        @dataclass(frozen=True)
        class SolverPlayer:
            objective: Objective

            def respond(self, g, opp):
                res = solve(g, objective=self.objective)
                return StrategyDecision(res.principal_move, "principal"), self

            def state_key(self):
                return ("solver",)

            def canonical_colors(self):
                return {}, b"solver"

            def objective_secured(self, g):
                return False

        for n in (3, 4):
            value = solve(
                GameGraph.empty(n, 3), objective=Objective.FORCE_HAMILTONIAN
            ).mover_wins
            rep = exhaust_adversary(
                SolverPlayer(Objective.FORCE_HAMILTONIAN),
                "builder",
                GameGraph.empty(n, 3),
                early_stop=False,
            )
            assert rep.all_ok == value

    def test_max_nodes(self):
        with pytest.raises(TooLarge):
            exhaust_adversary(
                BuilderPlayer(),
                "builder",
                GameGraph.empty(6, 4),
                early_stop=False,
                prune_isomorphic=False,
                max_nodes=3,
            )
