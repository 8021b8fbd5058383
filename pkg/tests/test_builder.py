"""Builder strategy: path maintenance for caps k >= 4."""

import random

import pytest

from capgame.builder_strategy import (
    BadOpening,
    BuilderPlayer,
    HamPathState,
    builder_close,
    builder_open,
    builder_respond,
    check_path_invariants,
)
from capgame.graph_core import (
    GameGraph,
    MoveEdge,
    add_edge,
    legal_moves,
    move,
)
from capgame.oracle import hamilton_cycle


def play_path(n, k, path_edges):
    return GameGraph.from_edges(n, k, path_edges)


class TestOpen:
    def test_first_move(self):
        dec, state = builder_open(GameGraph.empty(5, 4))
        assert tuple(dec.edge) == (0, 1) and dec.rule == "open"
        assert state.path == (0, 1)

    def test_second_move(self):
        g = play_path(5, 4, [(2, 4)])
        dec, state = builder_open(g)
        assert tuple(dec.edge) == (0, 4)
        assert state.path == (2, 4, 0)

    def test_bad_opening(self):
        with pytest.raises(BadOpening):
            builder_open(play_path(5, 4, [(0, 1), (2, 3)]))
        with pytest.raises(BadOpening):
            builder_open(GameGraph.empty(5, 3))


class TestRespond:
    def setup_method(self):
        self.g = play_path(6, 4, [(0, 1), (1, 2)])
        self.state = HamPathState((0, 1, 2))

    def row(self, opp_edge, path_before=None, g=None):
        state = HamPathState(path_before) if path_before else self.state
        g = g if g is not None else self.g
        g = add_edge(g, move(*opp_edge))
        dec, new_state = builder_respond(state, g, move(*opp_edge))
        g = add_edge(g, dec.edge)
        return dec, new_state, g

    def test_row_a_two_isolated(self):
        dec, state, g = self.row((3, 4))
        assert tuple(dec.edge) == (2, 3) and dec.rule == "row-a"
        assert state.path == (0, 1, 2, 3, 4)
        assert state.x1 == 0 and state.x2 == 4
        check_path_invariants(state, g)

    def test_row_f_ends_joined(self):
        dec, state, g = self.row((0, 2))
        assert tuple(dec.edge) == (2, 3) and dec.rule == "row-f"
        assert state.path == (3, 2, 1, 0)
        assert g.degree(state.x1) == 1 and g.degree(state.x2) == 2
        check_path_invariants(state, g)

    def test_row_c_chord_to_end(self):
        g = play_path(6, 4, [(0, 1), (1, 2), (2, 3)])
        dec, state, g = self.row((1, 3), path_before=(0, 1, 2, 3), g=g)
        assert tuple(dec.edge) == (3, 4) and dec.rule == "row-c"
        assert state.path == (0, 1, 2, 3, 4)
        check_path_invariants(state, g)

    def test_row_b_interior_chord(self):
        g = play_path(7, 4, [(0, 1), (1, 2), (2, 3), (3, 4)])
        dec, state, g = self.row((1, 3), path_before=(0, 1, 2, 3, 4), g=g)
        assert tuple(dec.edge) == (4, 5) and dec.rule == "row-b"
        assert state.path == (0, 1, 2, 3, 4, 5)
        check_path_invariants(state, g)

    def test_row_d_interior_to_isolated(self):
        dec, state, g = self.row((1, 4))
        assert tuple(dec.edge) == (2, 4) and dec.rule == "row-d"
        assert state.path == (0, 1, 2, 4)
        assert g.degree(state.x2) == 2
        check_path_invariants(state, g)

    def test_row_e_end_to_isolated(self):
        dec, state, g = self.row((2, 4))
        assert tuple(dec.edge) == (4, 3) or tuple(dec.edge) == (3, 4)
        assert dec.rule == "row-e"
        assert state.path == (0, 1, 2, 4, 3)
        check_path_invariants(state, g)

    def test_row_e_front_end(self):
        dec, state, g = self.row((0, 4))
        assert dec.rule == "row-e"
        assert state.path == (3, 4, 0, 1, 2)
        assert g.degree(state.x1) == 1
        check_path_invariants(state, g)


class TestClose:
    def test_close_spanning(self):
        g = play_path(4, 4, [(0, 1), (1, 2), (2, 3)])
        dec = builder_close(HamPathState((0, 1, 2, 3)), g)
        assert tuple(dec.edge) == (0, 3) and dec.rule == "close"

    def test_filler_when_closed(self):
        g = play_path(4, 4, [(0, 1), (1, 2), (2, 3), (0, 3)])
        dec = builder_close(HamPathState((0, 1, 2, 3)), g)
        assert dec.rule == "filler"
        assert dec.edge in legal_moves(g)


class TestRandomPlay:
    def test_invariants_and_terminal_cycle(self):
        rng = random.Random(0)
        for k in (4, 5):
            for n in (5, 6, 8, 11):
                for trial in range(30):
                    g = GameGraph.empty(n, k)
                    player = BuilderPlayer()
                    last = None
                    builder_turn = trial % 2 == 0
                    while True:
                        moves = sorted(legal_moves(g))
                        if not moves:
                            break
                        if builder_turn:
                            dec, player = player.respond(g, last)
                            assert dec.edge in legal_moves(g)
                            g = add_edge(g, dec.edge)
                            last = dec.edge
                            if not player.closed and g.isolated_mask():
                                check_path_invariants(player.state, g)
                        else:
                            m = moves[rng.randrange(len(moves))]
                            g = add_edge(g, m)
                            last = m
                        builder_turn = not builder_turn
                    assert hamilton_cycle(g) is not None, (k, n, trial)

    def test_row_classification_total(self):
        # every opponent move against a maintained path lands in some row
        rng = random.Random(1)
        for _ in range(200):
            n = rng.choice([6, 8])
            g = GameGraph.empty(n, 4)
            player = BuilderPlayer()
            dec, player = player.respond(g, None)
            g = add_edge(g, dec.edge)
            last = None
            for _ in range(rng.randrange(1, n)):
                moves = sorted(legal_moves(g))
                if not moves:
                    break
                m = moves[rng.randrange(len(moves))]
                g = add_edge(g, m)
                dec, player = player.respond(g, m)
                g = add_edge(g, dec.edge)
                assert dec.rule in {
                    "row-a", "row-b", "row-c", "row-d", "row-e", "row-f",
                    "close", "filler",
                }
