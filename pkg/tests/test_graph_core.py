"""Graph substrate: moves, components, freedom, witnesses."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from capgame.graph_core import (
    DegreeCapExceeded,
    DuplicateEdge,
    GameGraph,
    MoveEdge,
    OutOfRange,
    SelfLoop,
    add_edge,
    component_view,
    freedom,
    from_json,
    from_text,
    has_witness,
    is_eventual_cut_vertex,
    legal_moves,
    load_graph,
    move,
    to_json,
    to_text,
)

from helpers import DIAMOND_EDGES, K4_EDGES, diamond_plus_apex, graph
from oracles import (
    naive_components,
    naive_eventual_cut_vertex,
    some_completion_hamiltonian,
)


# random graph strategy: a seed expands to a legal random cap-3 position
@st.composite
def random_position(draw, max_n=9, k=3):
    n = draw(st.integers(2, max_n))
    g = GameGraph.empty(n, k)
    steps = draw(st.integers(0, 2 * n))
    seed = draw(st.integers(0, 2**32 - 1))
    import random

    rng = random.Random(seed)
    for _ in range(steps):
        moves = sorted(legal_moves(g))
        if not moves:
            break
        g = add_edge(g, moves[rng.randrange(len(moves))])
    return g


class TestAddEdge:
    def test_single_insertion(self):
        g = add_edge(GameGraph.empty(4, 3), move(0, 1))
        assert g.degree(0) == g.degree(1) == 1
        assert g.edges() == [MoveEdge(0, 1)]

    def test_cap_exceeded(self):
        tri = graph(4, 2, [(0, 1), (1, 2), (0, 2)])
        with pytest.raises(DegreeCapExceeded):
            add_edge(tri, move(0, 3))

    def test_duplicate(self):
        g = graph(3, 3, [(0, 1)])
        with pytest.raises(DuplicateEdge):
            add_edge(g, move(1, 0))

    def test_self_loop_and_range(self):
        g = GameGraph.empty(3, 3)
        with pytest.raises(SelfLoop):
            add_edge(g, MoveEdge(1, 1))
        with pytest.raises(OutOfRange):
            add_edge(g, move(0, 5))

    @settings(max_examples=80, deadline=None)
    @given(random_position())
    def test_degree_sum_is_twice_edges(self, g):
        assert sum(g.degrees()) == 2 * g.edge_count()


class TestLegalMoves:
    def test_two_vertices(self):
        assert legal_moves(GameGraph.empty(2, 3)) == {MoveEdge(0, 1)}

    def test_k4_saturated(self):
        assert legal_moves(graph(4, 3, K4_EDGES)) == set()

    def test_enumeration(self):
        assert legal_moves(graph(3, 3, [(0, 1)])) == {MoveEdge(0, 2), MoveEdge(1, 2)}

    @settings(max_examples=80, deadline=None)
    @given(random_position())
    def test_empty_iff_free_vertices_form_clique(self, g):
        free = [v for v in range(g.n) if g.degree(v) < g.k]
        clique = all(
            g.adjacent(u, v) for i, u in enumerate(free) for v in free[i + 1:]
        )
        assert (not legal_moves(g)) == clique


class TestComponentView:
    def test_basic_partition(self):
        g = graph(5, 3, [(0, 1), (2, 3)])
        view = component_view(g, 0)
        assert view.c_vertices == {0, 1}
        assert [set(d) for d in view.d_components] == [{2, 3}]
        assert view.isolated == {4}

    def test_isolated_root(self):
        g = GameGraph.empty(4, 3)
        view = component_view(g, 0)
        assert view.c_vertices == {0}
        assert view.d_components == ()
        assert view.isolated == {1, 2, 3}

    def test_root_in_small_component(self):
        g = graph(5, 3, [(0, 1), (1, 2), (0, 2), (3, 4)])
        view = component_view(g, 4)
        assert view.c_vertices == {3, 4}
        assert [set(d) for d in view.d_components] == [{0, 1, 2}]

    @settings(max_examples=60, deadline=None)
    @given(random_position(), st.integers(0, 8))
    def test_partition_matches_naive_components(self, g, root_raw):
        root = root_raw % g.n
        view = component_view(g, root)
        parts = [set(view.c_vertices), *map(set, view.d_components)]
        parts.extend({v} for v in view.isolated)
        # disjoint cover of the pool
        seen = set()
        for p in parts:
            assert not (p & seen)
            seen |= p
        assert seen == set(range(g.n))
        naive = naive_components(g)
        assert set(view.c_vertices) in naive or view.c_vertices == {root}
        for d in view.d_components:
            assert set(d) in naive

    @settings(max_examples=40, deadline=None)
    @given(random_position(), st.integers(0, 8))
    def test_add_edge_merges_at_most_two_parts(self, g, root_raw):
        root = root_raw % g.n
        before = component_view(g, root)
        moves = sorted(legal_moves(g))
        if not moves:
            return
        after = component_view(add_edge(g, moves[0]), root)
        n_before = 1 + len(before.d_components) + len(before.isolated)
        n_after = 1 + len(after.d_components) + len(after.isolated)
        assert n_after in (n_before, n_before - 1)


class TestFreedom:
    def test_single_edge(self):
        g = graph(2, 3, [(0, 1)])
        assert freedom(g, {0, 1}) == freedom(g, 0b11)
        assert freedom(g, {0, 1}).f == 4
        assert freedom(g, {0, 1}).e == 2

    def test_triangle(self):
        g = graph(3, 3, [(0, 1), (1, 2), (0, 2)])
        st_ = freedom(g, {0, 1, 2})
        assert (st_.f, st_.e) == (3, 1)

    def test_k4(self):
        g = graph(4, 3, K4_EDGES)
        st_ = freedom(g, {0, 1, 2, 3})
        assert (st_.f, st_.e) == (0, -2)

    def test_union_sums_per_component(self):
        g = graph(5, 3, [(0, 1), (2, 3), (3, 4)])
        # two components: single edge (f=4,e=2) and path (f=5,e=3)
        st_ = freedom(g, {0, 1, 2, 3, 4})
        assert (st_.f, st_.e) == (9, 5)

    @settings(max_examples=60, deadline=None)
    @given(random_position())
    def test_additivity_over_disjoint_components(self, g):
        comps = naive_components(g)
        total = freedom(g, set(range(g.n)))
        assert total.f == sum(freedom(g, c).f for c in comps)
        assert total.e == sum(freedom(g, c).e for c in comps)


class TestEventualCutVertex:
    def test_diamond_plus_apex(self):
        g = diamond_plus_apex()
        assert naive_eventual_cut_vertex(g, 4)  # oracle agrees first
        assert is_eventual_cut_vertex(g, 4)

    def test_single_edge_no(self):
        g = graph(2, 3, [(0, 1)])
        assert not is_eventual_cut_vertex(g, 0)

    def test_isolated_no(self):
        g = graph(4, 3, [(1, 2)])
        assert not is_eventual_cut_vertex(g, 0)

    @settings(max_examples=100, deadline=None)
    @given(random_position())
    def test_matches_naive_definition(self, g):
        for x in range(g.n):
            assert is_eventual_cut_vertex(g, x) == naive_eventual_cut_vertex(g, x)


class TestWitness:
    def test_k4_plus_isolated(self):
        g = graph(5, 3, K4_EDGES)
        w = has_witness(g)
        assert w.kind == "three_regular_component"
        assert w.component == frozenset({0, 1, 2, 3})

    def test_spanning_k4_is_no_witness(self):
        assert not has_witness(graph(4, 3, K4_EDGES))

    def test_diamond_apex_with_others(self):
        g = GameGraph.from_edges(7, 3, DIAMOND_EDGES + [(0, 4), (1, 4)])
        w = has_witness(g)
        assert w.kind == "eventual_cut_vertex" and w.vertex == 4
        assert not some_completion_hamiltonian(g)

    def test_path_plus_isolated_no_witness(self):
        g = graph(4, 3, [(0, 1), (1, 2)])
        assert not has_witness(g)
        assert some_completion_hamiltonian(g)  # 0-1-2-3-0 is reachable

    @settings(max_examples=60, deadline=None)
    @given(random_position())
    def test_firing_matches_an_eventual_cut_vertex_or_frozen_component(self, g):
        w = has_witness(g)
        if not w:
            return
        if w.kind == "eventual_cut_vertex":
            assert naive_eventual_cut_vertex(g, w.vertex)
        else:
            assert all(g.degree(v) == 3 for v in w.component)
            assert len(w.component) < g.n


class TestSerialization:
    def test_text_round_trip(self):
        g = graph(5, 3, [(0, 1), (2, 3)])
        assert from_text(to_text(g)).adj == g.adj
        assert load_graph(to_text(g)).adj == g.adj

    def test_json_round_trip(self):
        g = graph(5, 4, [(3, 1), (0, 4)])
        text = to_json(g)
        assert '"edges": [[0, 4], [1, 3]]'.replace(" ", "") in text.replace(" ", "")
        assert from_json(text).adj == g.adj
        assert load_graph(text).adj == g.adj
