"""The Hamiltonian player's strategy for degree caps k >= 4.

Invariant maintained after each of this player's moves while isolated
vertices remain: the non-isolated vertices carry a Hamilton path whose front
end has degree 1 and whose back end has degree at most 2.  Every opponent
move falls into one of six patterns (by where its endpoints sit relative to
the path interior, the two ends, and the isolated pool), and each pattern has
a reply that re-establishes the invariant.  Once the pool is exhausted the
path spans the board and joining its ends closes a Hamilton cycle; the cap
k >= 4 guarantees that closing edge is always legal.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .graph_core import (
    GameGraph,
    MoveEdge,
    StrategyDecision,
    is_legal,
    iter_legal_moves,
    mask_of,
    move,
)


class BadOpening(Exception):
    """The graph is not in an opening shape (empty or a single edge)."""


class IllegalReply(Exception):
    """A mandated reply is illegal; impossible for k >= 4, so this flags an
    engine or bookkeeping bug rather than a strategy gap."""


class NoPathState(Exception):
    """builder_respond called without an established path."""


@dataclass(frozen=True)
class HamPathState:
    """Hamilton path over the non-isolated vertices.

    path[0] is the degree-1 end, path[-1] the degree-at-most-2 end.
    """

    path: tuple[int, ...]

    @property
    def x1(self) -> int:
        return self.path[0]

    @property
    def x2(self) -> int:
        return self.path[-1]

    def mask(self) -> int:
        return mask_of(self.path)


def _lowest_isolated(g: GameGraph, exclude: int = 0) -> Optional[int]:
    for v in range(g.n):
        if not g.adj[v] and not (exclude >> v & 1):
            return v
    return None


def _checked(g: GameGraph, u: int, v: int, rule: str) -> StrategyDecision:
    m = move(u, v)
    if not is_legal(g, m):
        raise IllegalReply(f"reply {m} for rule {rule} is illegal")
    return StrategyDecision(m, rule)


def _filler(g: GameGraph) -> StrategyDecision:
    m = next(iter_legal_moves(g), None)
    if m is None:
        raise IllegalReply("no legal move left for filler")
    return StrategyDecision(m, "filler")


def builder_open(g: GameGraph) -> tuple[StrategyDecision, HamPathState]:
    """Opening move: on the empty board draw (0,1); after the opponent's lone
    edge, extend it from its higher endpoint to the lowest isolated vertex."""
    if g.k < 4:
        raise BadOpening(f"builder strategy requires k >= 4, got k={g.k}")
    edges = g.edges()
    if not edges:
        if g.n < 2:
            raise BadOpening("need at least two vertices")
        return _checked(g, 0, 1, "open"), HamPathState((0, 1))
    if len(edges) == 1:
        a, b = edges[0]
        v = _lowest_isolated(g)
        if v is None:
            raise BadOpening("no isolated vertex to extend the opening edge")
        return _checked(g, b, v, "open"), HamPathState((a, b, v))
    raise BadOpening(f"not an opening position ({len(edges)} edges)")


def _classify(state: HamPathState, opp: MoveEdge) -> str:
    members = set(state.path)
    ends = {state.x1, state.x2}
    a, b = opp
    a_in, b_in = a in members, b in members
    if not a_in and not b_in:
        return "a"
    if a_in and b_in:
        a_end, b_end = a in ends, b in ends
        if a_end and b_end:
            return "f"
        if a_end or b_end:
            return "c"
        return "b"
    inside = a if a_in else b
    return "e" if inside in ends else "d"


def builder_close(state: HamPathState, g: GameGraph) -> StrategyDecision:
    """With the pool empty and the path spanning, join the ends; if they are
    already adjacent the cycle exists and any legal move is safe."""
    e1, e2 = state.path[0], state.path[-1]
    if not g.adjacent(e1, e2):
        return _checked(g, e1, e2, "close")
    return _filler(g)


def builder_respond(
    state: HamPathState, g: GameGraph, opp: MoveEdge
) -> tuple[StrategyDecision, HamPathState]:
    """Reply to the opponent's move (already present in g) and return the
    re-established path.

    When a pattern calls for an isolated vertex and none remains, the path
    has become spanning; the reply degrades to closing the cycle (or to a
    filler once the cycle exists).
    """
    if state is None:
        raise NoPathState("no path established yet")
    row = _classify(state, opp)
    path = state.path
    x1, x2 = path[0], path[-1]
    rule = f"row-{row}"

    if row == "a":
        v, w = opp
        dec = _checked(g, x2, v, rule)
        return dec, HamPathState(path + (v, w))

    if row == "b":
        v = _lowest_isolated(g)
        if v is None:
            return builder_close(state, g), state
        return _checked(g, x2, v, rule), HamPathState(path + (v,))

    if row == "c":
        ends = {x1, x2}
        xj = opp.u if opp.u in ends else opp.v
        v = _lowest_isolated(g)
        if v is None:
            return builder_close(state, g), state
        dec = _checked(g, xj, v, rule)
        new = (v,) + path if xj == x1 else path + (v,)
        return dec, HamPathState(new)

    if row == "d":
        members = set(path)
        v = opp.u if opp.u not in members else opp.v
        dec = _checked(g, x2, v, rule)
        return dec, HamPathState(path + (v,))

    if row == "e":
        ends = {x1, x2}
        xj = opp.u if opp.u in ends else opp.v
        v = opp.v if xj == opp.u else opp.u
        new = (v,) + path if xj == x1 else path + (v,)
        w = _lowest_isolated(g)
        if w is None:
            ns = HamPathState(new)
            return builder_close(ns, g), ns
        dec = _checked(g, v, w, rule)
        new = (w,) + new if xj == x1 else new + (w,)
        return dec, HamPathState(new)

    # row f: the opponent joined the two ends.
    v = _lowest_isolated(g)
    if v is None:
        return _filler(g), state
    dec = _checked(g, x2, v, rule)
    return dec, HamPathState((v,) + tuple(reversed(path)))


def check_path_invariants(state: HamPathState, g: GameGraph) -> None:
    """Assert the maintained-path invariants; used after every builder move
    in simulations while isolated vertices remain."""
    path = state.path
    assert len(set(path)) == len(path), "path repeats a vertex"
    for a, b in zip(path, path[1:]):
        assert g.adjacent(a, b), f"path gap {a}-{b}"
    assert g.degree(path[0]) == 1, f"front end degree {g.degree(path[0])} != 1"
    assert g.degree(path[-1]) <= 2, f"back end degree {g.degree(path[-1])} > 2"
    noniso = mask_of(v for v in range(g.n) if g.adj[v])
    assert state.mask() == noniso, "path does not cover the non-isolated vertices"


@dataclass(frozen=True)
class BuilderPlayer:
    """Immutable game-ready handle over the builder strategy."""

    state: Optional[HamPathState] = None
    closed: bool = False

    def respond(
        self, g: GameGraph, opp: Optional[MoveEdge]
    ) -> tuple[StrategyDecision, "BuilderPlayer"]:
        if self.closed:
            return _filler(g), self
        if self.state is None:
            dec, st = builder_open(g)
            return dec, BuilderPlayer(state=st)
        if opp is None:
            raise NoPathState("mid-game builder turn without the opponent's move")
        dec, st = builder_respond(self.state, g, opp)
        if dec.rule in ("close", "filler"):
            return dec, BuilderPlayer(state=st, closed=True)
        return dec, BuilderPlayer(state=st)

    def state_key(self):
        if self.closed or self.state is None:
            return ("closed" if self.closed else "fresh",)
        p = self.state.path
        return (p[0], p[-1], self.state.mask())

    def canonical_colors(self) -> tuple[dict[int, int], bytes]:
        if self.closed or self.state is None:
            return {}, b"closed" if self.closed else b"fresh"
        return {self.state.x1: 1, self.state.x2: 2}, b"path"

    def objective_secured(self, g: GameGraph) -> bool:
        if self.closed:
            return True
        if self.state is None:
            return False
        p = self.state.path
        return len(p) == g.n and g.adjacent(p[0], p[-1])
