"""The avoider's strategy for the cubic cap: force a final graph that is not
2-connected.

The driver keeps a tracked vertex (the root) and plays from the state of the
root's component C: join stray degree-1 vertices, steer degree-2 vertices so
no two adjacent ones survive, and grow small components out of the isolated
pool.  The endgame begins when C is saturated except one adjacent degree-2
pair while the rest of the board holds exactly two degrees of freedom per
component.  From there a scripted tree of forced lines (two small decision
trees plus two terminal endgames) drives the position into either a saturated
proper component or an eventual cut vertex; both features are permanent, so
from that point any filler move preserves the win.

Moving first reduces to the same machinery: the opening move (0,1) becomes
the initial board and the tracked vertex is 0; moving second, the tracked
vertex is the lower endpoint of the opponent's first edge.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional

from .classify import (
    AvoiderRow,
    AvoiderState,
    classify_avoider_state,
)
from .graph_core import (
    ComponentView,
    GameGraph,
    MoveEdge,
    StrategyDecision,
    WitnessReport,
    bits,
    component_view,
    has_witness,
    is_legal,
    iter_legal_moves,
    move,
    reach_mask,
    witness_still_valid,
)

log = logging.getLogger(__name__)


class NoLegalMove(Exception):
    """The game is already over."""


class StrategyBreak(Exception):
    """A mandated move is impossible or the position diverges from the
    scripted analysis; carries the position for diagnosis."""


class NoValidPairing(Exception):
    """pair_four_degree2 failed; impossible when its precondition holds."""


class UnmatchedPosition(Exception):
    """An opponent move not covered by any branch of the active decision
    tree (and no witness present to fall back on)."""


class Phase(Enum):
    MAIN = "main"
    CLAIM2_P1 = "claim2-p1"
    AFTER_LINK = "claim2-link"
    FIG4 = "fig4"
    FIG5 = "fig5"
    TYPE_A = "typeA"
    TYPE_B = "typeB"
    PAIR_TRAP = "pair-trap"


@dataclass(frozen=True)
class AvoiderPlan:
    """Strategy state: tracked root, active phase, and the named vertices the
    phase script refers to.  comp_pairs caches, per outstanding component,
    its mask and two degree-2 vertices (used by the endgame turn table)."""

    root_x: Optional[int] = None
    phase: Phase = Phase.MAIN
    fig_node: Optional[str] = None
    bindings: tuple[tuple[str, int], ...] = ()
    comp_pairs: tuple[tuple[int, int, int], ...] = ()
    witness: Optional[WitnessReport] = None

    def bound(self, name: str) -> int:
        for k, v in self.bindings:
            if k == name:
                return v
        raise KeyError(name)


def _b(**names: int) -> tuple[tuple[str, int], ...]:
    return tuple(sorted(names.items()))


def _old_degree(g: GameGraph, opp: Optional[MoveEdge], v: int) -> int:
    d = g.degree(v)
    if opp is not None and v in opp:
        d -= 1
    return d


def _decide(
    g: GameGraph, u: int, v: int, rule: str, plan: AvoiderPlan
) -> tuple[StrategyDecision, AvoiderPlan]:
    m = move(u, v)
    if not is_legal(g, m):
        raise StrategyBreak(f"mandated move {m} for {rule} is illegal in {g.edges()}")
    return StrategyDecision(m, rule), plan


def _filler(g: GameGraph, plan: AvoiderPlan, rule: str) -> tuple[StrategyDecision, AvoiderPlan]:
    avoid = 0
    if plan.witness is not None:
        for v in plan.witness.component or ():
            avoid |= 1 << v
        if plan.witness.vertex is not None:
            avoid |= 1 << plan.witness.vertex
    first = None
    for m in iter_legal_moves(g):
        if first is None:
            first = m
        if not (avoid >> m.u & 1) and not (avoid >> m.v & 1):
            return StrategyDecision(m, rule), plan
    if first is None:
        raise NoLegalMove("no legal move left")
    return StrategyDecision(first, rule), plan


def _isolated(g: GameGraph) -> list[int]:
    return [v for v in range(g.n) if not g.adj[v]]


def _deg_lists(g: GameGraph, vertices) -> tuple[list[int], list[int]]:
    d1, d2 = [], []
    for v in sorted(vertices):
        d = g.degree(v)
        if d == 1:
            d1.append(v)
        elif d == 2:
            d2.append(v)
    return d1, d2


# ---------------------------------------------------------------------------
# Four degree-2 vertices: the non-adjacent pairing
# ---------------------------------------------------------------------------

def pair_four_degree2(
    g: GameGraph, comp, four
) -> tuple[tuple[int, int], tuple[int, int]]:
    """Label four degree-2 vertices of an otherwise saturated component as
    ((u, v), (p, q)) with u not adjacent to v and p not adjacent to q.

    Case split on how many of the other three the first vertex touches (0, 1
    or 2); connectivity of the component rules out the obstructions, so a
    valid labeling always exists.
    """
    four = sorted(four)
    if len(four) != 4 or len(set(four)) != 4:
        raise ValueError("need exactly four distinct vertices")
    comp_set = set(bits(comp)) if isinstance(comp, int) else set(comp)
    for v in comp_set:
        want = 2 if v in four else 3
        if g.degree(v) != want:
            raise ValueError(
                f"component is not saturated-except-the-four (vertex {v})"
            )

    u, rest = four[0], four[1:]
    touching = [o for o in rest if g.adjacent(u, o)]

    if len(touching) == 0:
        for i, x in enumerate(rest):
            others = [o for o in rest if o != x]
            if not g.adjacent(others[0], others[1]):
                return (u, x), (others[0], others[1])
        raise NoValidPairing("the other three are pairwise adjacent")
    if len(touching) == 1:
        v = touching[0]
        p, q = [o for o in rest if o != v]
        if g.adjacent(v, p):
            p, q = q, p
        if not g.adjacent(u, q) and not g.adjacent(v, p):
            return (u, q), (v, p)
        raise NoValidPairing("case-1 labeling failed")
    if len(touching) == 2:
        v, q = touching
        p = next(o for o in rest if o not in touching)
        if not g.adjacent(u, p) and not g.adjacent(v, q):
            return (u, p), (v, q)
        raise NoValidPairing("case-2 labeling failed")
    raise NoValidPairing("a degree-2 vertex touches three others")


# ---------------------------------------------------------------------------
# Main-table move selection
# ---------------------------------------------------------------------------

def _row_c_move(g: GameGraph, view: ComponentView, u: int) -> MoveEdge:
    """Join the lone degree-1 vertex to a degree-2 vertex, with the refined
    choice that keeps the follow-up analysis sound: if the degree-1 vertex
    hangs off one of exactly two degree-2 vertices, join those two instead
    (leaving the degree-1 vertex as a frozen stub), unless they are already
    adjacent, in which case join it to the other one."""
    _, deg2 = _deg_lists(g, view.c_vertices)
    nbr = g.adj[u]
    if len(deg2) == 2:
        a, b = deg2
        if nbr >> a & 1 or nbr >> b & 1:
            s, t = (a, b) if nbr >> a & 1 else (b, a)
            if not g.adjacent(s, t):
                return move(s, t)
            return move(u, t)
        return move(u, a)
    for d in deg2:
        if not (nbr >> d & 1):
            return move(u, d)
    if deg2:
        return move(u, deg2[0])
    raise StrategyBreak("row-c with no degree-2 vertex in C")


def _row_d_move(g: GameGraph, view: ComponentView) -> tuple[MoveEdge, str]:
    deg2 = _deg_lists(g, view.c_vertices)[1]
    nonadj = [
        (a, b)
        for i, a in enumerate(deg2)
        for b in deg2[i + 1:]
        if not g.adjacent(a, b)
    ]
    if not nonadj:
        raise StrategyBreak("row-d with no non-adjacent degree-2 pair")
    if len(deg2) <= 3:
        return move(*nonadj[0]), "row-d"
    if len(deg2) == 4:
        (u, v), _pq = pair_four_degree2(g, view.c_mask, deg2)
        return move(u, v), "row-d"
    for a, b in nonadj:
        left = [d for d in deg2 if d not in (a, b)]
        if not any(
            g.adjacent(p, q) for i, p in enumerate(left) for q in left[i + 1:]
        ):
            return move(a, b), "row-d"
    log.warning("row-d gap: no pair avoids leaving an adjacent degree-2 pair")
    return move(*nonadj[0]), "row-d-gap"


def _row_e_move(g: GameGraph, view: ComponentView, pair: tuple[int, int]) -> MoveEdge:
    """Link C to the rest of the board.  Prefer a degree-1 target: joining a
    degree-2 vertex of a component that also has a stray degree-1 vertex
    could leave C one degree-1 and one degree-2 short of saturation, the one
    shape the follow-up analysis must never create."""
    d_vertices: list[int] = []
    for dmask in view.d_masks:
        d_vertices.extend(bits(dmask))
    d1 = sorted(v for v in d_vertices if g.degree(v) == 1)
    d2 = sorted(v for v in d_vertices if g.degree(v) == 2)
    target = d1[0] if d1 else (d2[0] if d2 else None)
    if target is None:
        raise StrategyBreak("row-e with no free vertex in D")
    return move(min(pair), target)


def _well_formed_comp_pairs(
    g: GameGraph, d_masks
) -> Optional[tuple[tuple[int, int, int], ...]]:
    """(mask, p, q) per component when every component is saturated except
    exactly two degree-2 vertices; None otherwise."""
    out = []
    for dmask in d_masks:
        deg2 = []
        for v in bits(dmask):
            d = g.degree(v)
            if d == 2:
                deg2.append(v)
            elif d != 3:
                return None
        if len(deg2) != 2:
            return None
        out.append((dmask, deg2[0], deg2[1]))
    return tuple(out)


def _enter_claim2_if_ripe(
    plan: AvoiderPlan, g2: GameGraph
) -> AvoiderPlan:
    """After one of our main-table moves: if C became the adjacent-pair shape
    with zero effective freedom outside (every component holding exactly two
    degree-2 vertices), arm the endgame turn table for the opponent's reply."""
    view2 = component_view(g2, plan.root_x)
    if len(view2.c_vertices) < 4:
        return plan
    d1, d2 = _deg_lists(g2, view2.c_vertices)
    if d1 or len(d2) != 2 or not g2.adjacent(d2[0], d2[1]):
        return plan
    if any(g2.degree(v) not in (2, 3) for v in view2.c_vertices):
        return plan
    pairs = _well_formed_comp_pairs(g2, view2.d_masks)
    if pairs is None:
        return plan
    return replace(
        plan,
        phase=Phase.CLAIM2_P1,
        fig_node=None,
        bindings=_b(v=d2[0], w=d2[1]),
        comp_pairs=pairs,
    )


# ---------------------------------------------------------------------------
# Endgame: the adjacent-pair component with zero outside freedom
# ---------------------------------------------------------------------------

def _derive_claim2_bindings(g: GameGraph, view: ComponentView, opp: Optional[MoveEdge]):
    """Reconstruct the pair and component table for the position before opp's
    move (used when claim2_respond is called without an armed plan)."""
    base = g
    if opp is not None:
        adj = list(g.adj)
        adj[opp.u] &= ~(1 << opp.v)
        adj[opp.v] &= ~(1 << opp.u)
        base = GameGraph(g.n, g.k, tuple(adj))
    v0 = component_view(base, view.root_x)
    d1, d2 = _deg_lists(base, v0.c_vertices)
    if d1 or len(d2) != 2 or not base.adjacent(d2[0], d2[1]):
        raise StrategyBreak("claim2 called but C is not the adjacent-pair shape")
    pairs = _well_formed_comp_pairs(base, v0.d_masks)
    if pairs is None:
        raise StrategyBreak("claim2 called with a malformed component outside C")
    return (d2[0], d2[1]), pairs


def claim2_respond(
    plan: AvoiderPlan,
    view: ComponentView,
    g: GameGraph,
    opp: Optional[MoveEdge],
) -> tuple[StrategyDecision, AvoiderPlan]:
    """Play the endgame that starts when C is saturated except one adjacent
    degree-2 pair (v, w) and every other component holds exactly two
    degree-2 vertices.

    On our turn (opp None): link v into some outside component, threatening
    to saturate the merged component next move; with nothing outside, open
    the first decision tree.  On the opponent's turn: mirror the move by the
    turn table (join the two untouched degree-2 partners, copy an isolated
    attachment, or hand off to the second decision tree / the single-edge
    endgame).
    """
    if plan.phase == Phase.CLAIM2_P1 and opp is not None:
        pair = (plan.bound("v"), plan.bound("w"))
        pairs = plan.comp_pairs
    else:
        pair, pairs = _derive_claim2_bindings(g, view, opp)
    v, w = sorted(pair)

    if opp is None:
        if pairs:
            mask, p, q = min(pairs, key=lambda t: min(t[1], t[2]))
            p, q = sorted((p, q))
            rest = tuple(t for t in pairs if t[0] != mask)
            plan2 = replace(
                plan,
                phase=Phase.AFTER_LINK,
                fig_node=None,
                bindings=_b(w=w, qj=q, v=v, pj=p),
                comp_pairs=rest,
            )
            return _decide(g, v, p, "claim2-p2-link", plan2)
        return _fig4_root(plan, g, (v, w))

    def locate(e: int):
        if e in (v, w):
            return ("pair", None)
        for i, (mask, p, q) in enumerate(pairs):
            if mask >> e & 1:
                return ("comp", i)
        return ("iso", None)

    e1, e2 = opp
    l1, l2 = locate(e1), locate(e2)
    kinds = {l1[0], l2[0]}

    if kinds == {"comp"}:
        if l1[1] == l2[1]:
            iso = _isolated(g)
            plan2 = replace(plan, phase=Phase.MAIN, bindings=(), comp_pairs=())
            if len(iso) >= 2:
                return _decide(g, iso[0], iso[1], "claim2-p1-c", plan2)
            return _filler(g, plan2, "claim2-p1-c")
        o1 = _partner(pairs[l1[1]], e1)
        o2 = _partner(pairs[l2[1]], e2)
        plan2 = replace(plan, phase=Phase.MAIN, bindings=(), comp_pairs=())
        return _decide(g, o1, o2, "claim2-p1-a", plan2)

    if kinds == {"pair", "comp"}:
        ph, pc = (e1, e2) if l1[0] == "pair" else (e2, e1)
        idx = l1[1] if l1[0] == "comp" else l2[1]
        other_h = w if ph == v else v
        plan2 = replace(plan, phase=Phase.MAIN, bindings=(), comp_pairs=())
        return _decide(g, other_h, _partner(pairs[idx], pc), "claim2-p1-b", plan2)

    if kinds == {"pair", "iso"}:
        ph, x = (e1, e2) if l1[0] == "pair" else (e2, e1)
        other_h = w if ph == v else v
        plan2 = replace(plan, phase=Phase.MAIN, bindings=(), comp_pairs=())
        return _decide(g, other_h, x, "claim2-p1-d", plan2)

    if kinds == {"comp", "iso"}:
        pc, x = (e1, e2) if l1[0] == "comp" else (e2, e1)
        idx = l1[1] if l1[0] == "comp" else l2[1]
        plan2 = replace(plan, phase=Phase.MAIN, bindings=(), comp_pairs=())
        return _decide(g, _partner(pairs[idx], pc), x, "claim2-p1-e", plan2)

    if kinds == {"iso"}:
        if pairs:
            pick = min(pairs, key=lambda t: min(t[1], t[2]))
            p, q = sorted((pick[1], pick[2]))
            plan2 = replace(
                plan,
                phase=Phase.TYPE_A,
                fig_node=None,
                bindings=_b(p=w, q=q, a=min(opp), b=max(opp)),
                comp_pairs=(),
            )
            return _decide(g, v, p, "claim2-p1-f", plan2)
        plan2 = replace(
            plan,
            phase=Phase.FIG5,
            fig_node="B",
            bindings=_b(u=w, s1=min(opp), s2=max(opp)),
            comp_pairs=(),
        )
        return _decide(g, v, min(opp), "claim2-p1-f", plan2)

    if has_witness(g):
        return _filler(g, replace(plan, phase=Phase.MAIN), "witness-hold")
    raise StrategyBreak(f"claim2 turn table has no row for {opp}")


def _partner(entry: tuple[int, int, int], e: int) -> int:
    _, p, q = entry
    return q if e == p else p


def _after_link_respond(
    plan: AvoiderPlan, g: GameGraph, opp: MoveEdge
) -> tuple[StrategyDecision, AvoiderPlan]:
    """Follow-ups after our pair-to-component link: the opponent must defuse
    the saturation threat by playing off one of the two live degree-2
    vertices; answer on the other one, or fire the threat."""
    w, qj = plan.bound("w"), plan.bound("qj")
    plan2 = replace(plan, phase=Phase.MAIN, bindings=(), comp_pairs=())
    live = {w, qj}
    hit = [e for e in opp if e in live]
    if len(hit) == 1:
        other_live = qj if hit[0] == w else w
        a = opp.v if opp.u == hit[0] else opp.u
        for mask, p, q in plan.comp_pairs:
            if mask >> a & 1:
                return _decide(g, other_live, _partner((mask, p, q), a), "claim2-link-comp", plan2)
        return _decide(g, other_live, a, "claim2-link-free", plan2)
    return _decide(g, w, qj, "claim2-link-threat", plan2)


# ---------------------------------------------------------------------------
# The two decision trees
# ---------------------------------------------------------------------------

def _fig4_root(
    plan: AvoiderPlan, g: GameGraph, pair: tuple[int, int]
) -> tuple[StrategyDecision, AvoiderPlan]:
    """Open the P2-turn tree: hang a fresh vertex off one of the adjacent
    degree-2 pair, threatening to make that vertex an eventual cut vertex."""
    u0, v0 = sorted(pair)
    iso = _isolated(g)
    if not iso:
        return _filler(g, replace(plan, phase=Phase.MAIN), "fallback")
    plan2 = replace(
        plan,
        phase=Phase.FIG4,
        fig_node="A",
        bindings=_b(sat=u0, v=v0, x=iso[0]),
        comp_pairs=(),
    )
    return _decide(g, u0, iso[0], "fig4-root", plan2)


def figure_tree_respond(
    plan: AvoiderPlan, g: GameGraph, opp: Optional[MoveEdge]
) -> tuple[StrategyDecision, AvoiderPlan]:
    """Walk the scripted decision trees.

    Each node matches the opponent's move against the depicted branches and
    otherwise fires the node's standing threat, which lands an eventual cut
    vertex or a saturated proper component (the undepicted moves are exactly
    the ones the threat punishes).  A witness already on the board
    short-circuits to holding play before anything is matched.
    """
    wr = has_witness(g)
    if wr:
        plan2 = replace(plan, phase=Phase.MAIN, witness=wr)
        return _filler(g, plan2, "witness-hold")

    if plan.phase == Phase.FIG4 and plan.fig_node == "root":
        view = component_view(g, plan.root_x)
        d1, d2 = _deg_lists(g, view.c_vertices)
        if d1 or len(d2) != 2 or not g.adjacent(d2[0], d2[1]):
            raise StrategyBreak("fig4 root without the adjacent-pair shape")
        return _fig4_root(plan, g, (d2[0], d2[1]))

    if opp is None:
        raise UnmatchedPosition("tree node awaits the opponent's move")

    main = replace(plan, phase=Phase.MAIN, fig_node=None, bindings=(), comp_pairs=())
    node = (plan.phase, plan.fig_node)

    if node == (Phase.FIG4, "A"):
        sat, v, x = plan.bound("sat"), plan.bound("v"), plan.bound("x")
        if v in opp:
            y = opp.v if opp.u == v else opp.u
            if y != x and _old_degree(g, opp, y) == 0:
                iso = _isolated(g)
                if iso:
                    p0, ell = min(x, y), max(x, y)
                    plan2 = replace(
                        plan,
                        fig_node="C",
                        bindings=_b(ell=ell, w=p0, t=iso[0]),
                    )
                    return _decide(g, p0, iso[0], "fig4-b", plan2)
                return _filler(g, main, "fallback")
        return _decide(g, v, x, "fig4-a-threat", main)

    if node == (Phase.FIG4, "C"):
        ell, w, t = plan.bound("ell"), plan.bound("w"), plan.bound("t")
        named = {ell, w, t}
        e1, e2 = opp
        fresh = [e for e in opp if e not in named and _old_degree(g, opp, e) == 0]
        inside = [e for e in opp if e in named]
        if len(fresh) == 2:
            plan2 = replace(
                plan,
                fig_node="E",
                bindings=_b(a=w, b=ell, m=t, s1=min(opp), s2=max(opp)),
            )
            return _decide(g, ell, t, "fig4-c-edge", plan2)
        if len(fresh) == 1 and len(inside) == 1:
            z = fresh[0]
            at = inside[0]
            if at == t:
                plan2 = replace(plan, fig_node="D", bindings=_b(p=t, q=z, r=ell))
                return _decide(g, w, z, "fig4-c-tip", plan2)
            if at == ell:
                plan2 = replace(plan, fig_node="D", bindings=_b(p=w, q=t, r=z))
                return _decide(g, ell, t, "fig4-c-stub", plan2)
            plan2 = replace(plan, fig_node="D", bindings=_b(p=t, q=z, r=ell))
            return _decide(g, t, z, "fig4-c-mid", plan2)
        if set(opp) == {ell, t}:
            return _decide(g, w, ell, "fig4-c-internal", main)
        if set(opp) == {ell, w}:
            return _decide(g, t, ell, "fig4-c-internal", main)
        raise UnmatchedPosition(f"fig4 node C: move {opp} not in the tree")

    if node == (Phase.FIG4, "D"):
        p, q, r = plan.bound("p"), plan.bound("q"), plan.bound("r")
        e1, e2 = opp
        fresh = [e for e in opp if e not in (p, q, r) and _old_degree(g, opp, e) == 0]
        if len(fresh) == 2:
            c0, c1 = min(p, q), max(p, q)
            plan2 = replace(
                plan,
                phase=Phase.TYPE_A,
                fig_node=None,
                bindings=_b(p=c1, q=r, a=min(opp), b=max(opp)),
            )
            return _decide(g, r, c0, "fig4-d-iso", plan2)
        if len(fresh) == 1:
            z = fresh[0]
            at = e1 if e2 == z else e2
            if at == r:
                third = max(p, q)
                plan2 = replace(
                    plan,
                    phase=Phase.TYPE_B,
                    fig_node=None,
                    bindings=_b(pb=min(r, z), qb=max(r, z), xb=third),
                )
                return _decide(g, min(p, q), z, "fig4-d-pend", plan2)
            if at in (p, q):
                third = q if at == p else p
                plan2 = replace(
                    plan,
                    phase=Phase.TYPE_B,
                    fig_node=None,
                    bindings=_b(pb=min(r, z), qb=max(r, z), xb=third),
                )
                return _decide(g, r, z, "fig4-d-pair", plan2)
        if set(opp) in ({p, r}, {q, r}):
            hit = e1 if e1 in (p, q) else e2
            other = q if hit == p else p
            return _decide(g, other, r, "fig4-d-close", main)
        raise UnmatchedPosition(f"fig4 node D: move {opp} not in the tree")

    if node == (Phase.FIG4, "E"):
        a, b_, m = plan.bound("a"), plan.bound("b"), plan.bound("m")
        s1, s2 = plan.bound("s1"), plan.bound("s2")
        ends, sedge = {a, b_}, {s1, s2}
        e1, e2 = opp
        if (e1 in ends and e2 in sedge) or (e2 in ends and e1 in sedge):
            end = e1 if e1 in ends else e2
            s = e1 if e1 in sedge else e2
            other_s = s2 if s == s1 else s1
            other_end = b_ if end == a else a
            plan2 = replace(
                plan,
                phase=Phase.TYPE_B,
                fig_node=None,
                bindings=_b(pb=min(s1, s2), qb=max(s1, s2), xb=other_end),
            )
            return _decide(g, m, other_s, "fig4-e-merge", plan2)
        fresh = [
            e for e in opp
            if e not in ends | sedge | {m} and _old_degree(g, opp, e) == 0
        ]
        if len(fresh) == 1 and (e1 in ends or e2 in ends):
            end = e1 if e1 in ends else e2
            x = fresh[0]
            other_end = b_ if end == a else a
            plan2 = replace(
                plan,
                phase=Phase.TYPE_A,
                fig_node=None,
                bindings=_b(p=min(other_end, x), q=max(other_end, x), a=s1, b=s2),
            )
            return _decide(g, m, x, "fig4-e-iso", plan2)
        return _decide(g, a, b_, "fig4-e-threat", main)

    if node == (Phase.FIG5, "B"):
        u, s1, s2 = plan.bound("u"), plan.bound("s1"), plan.bound("s2")
        e1, e2 = opp
        fresh = [e for e in opp if e not in (u, s1, s2) and _old_degree(g, opp, e) == 0]
        if u in opp and len(fresh) == 1:
            x = fresh[0]
            plan2 = replace(
                plan,
                fig_node="C",
                bindings=_b(e1=min(s1, x), e2=max(s1, x), m=s2),
            )
            return _decide(g, s2, x, "fig5-b-grow", plan2)
        if s1 in opp and len(fresh) == 1:
            x = fresh[0]
            plan2 = replace(
                plan,
                phase=Phase.TYPE_B,
                fig_node=None,
                bindings=_b(pb=min(s2, x), qb=max(s2, x), xb=u),
            )
            return _decide(g, s2, x, "fig5-b-branch", plan2)
        if set(opp) == {u, s2}:
            return _fig4_root(plan, g, (s1, s2))
        return _decide(g, u, s1, "fig5-b-threat", main)

    if node == (Phase.FIG5, "C"):
        e_1, e_2, m = plan.bound("e1"), plan.bound("e2"), plan.bound("m")
        fresh = [e for e in opp if e not in (e_1, e_2, m) and _old_degree(g, opp, e) == 0]
        if len(fresh) == 1 and (e_1 in opp or e_2 in opp):
            x = fresh[0]
            end = e_1 if e_1 in opp else e_2
            other = e_2 if end == e_1 else e_1
            plan2 = replace(
                plan,
                phase=Phase.PAIR_TRAP,
                fig_node=None,
                bindings=_b(g1=min(other, x), g2=max(other, x)),
            )
            return _decide(g, m, x, "fig5-c-grow", plan2)
        return _decide(g, e_1, e_2, "fig5-c-threat", main)

    raise UnmatchedPosition(f"unknown tree node {node}")


# ---------------------------------------------------------------------------
# Terminal endgames
# ---------------------------------------------------------------------------

def typeA_end(
    plan: AvoiderPlan, g: GameGraph, opp: Optional[MoveEdge]
) -> tuple[StrategyDecision, AvoiderPlan]:
    """Single-edge endgame: with (p, q) the tracked non-adjacent degree-2
    pair, saturate the component by joining them; if the opponent plays off
    one of them, answer on the other, landing an eventual cut vertex or a
    saturated merged component."""
    wr = has_witness(g)
    if wr:
        plan2 = replace(plan, phase=Phase.MAIN, witness=wr)
        return _filler(g, plan2, "witness-hold")
    p, q = plan.bound("p"), plan.bound("q")
    a, b_ = plan.bound("a"), plan.bound("b")
    main = replace(plan, phase=Phase.MAIN, bindings=(), comp_pairs=())
    if opp is not None and (p in opp or q in opp):
        hit = p if p in opp else q
        other = q if hit == p else p
        t = opp.v if opp.u == hit else opp.u
        old = _old_degree(g, opp, t)
        if t in (a, b_) or old == 0:
            return _decide(g, other, t, "typeA-cut", main)
        if old == 2:
            adj = list(g.adj)
            adj[opp.u] &= ~(1 << opp.v)
            adj[opp.v] &= ~(1 << opp.u)
            base = GameGraph(g.n, g.k, tuple(adj))
            comp = reach_mask(base.adj, t, base.full_mask())
            others = [
                z for z in bits(comp) if z != t and base.degree(z) == 2
            ]
            if len(others) == 1:
                return _decide(g, other, others[0], "typeA-merge", main)
        raise UnmatchedPosition(f"single-edge endgame: move {opp} off the pair")
    return _decide(g, p, q, "typeA-close", main)


def typeB_end(
    plan: AvoiderPlan, g: GameGraph, opp: Optional[MoveEdge]
) -> tuple[StrategyDecision, AvoiderPlan]:
    """Three-degree-2 endgame: pb and qb are the adjacent pair, xb the loner.
    Joining xb to either pair vertex leaves the other as an eventual cut
    vertex, so the opponent's only stall is growing xb outward; chase it."""
    wr = has_witness(g)
    if wr:
        plan2 = replace(plan, phase=Phase.MAIN, witness=wr)
        return _filler(g, plan2, "witness-hold")
    pb, qb, xb = plan.bound("pb"), plan.bound("qb"), plan.bound("xb")
    main = replace(plan, phase=Phase.MAIN, bindings=(), comp_pairs=())
    if opp is None:
        return _decide(g, min(pb, qb), xb, "typeB-open", main)
    fresh = [e for e in opp if e not in (pb, qb, xb) and _old_degree(g, opp, e) == 0]
    if xb in opp and len(fresh) == 1:
        y = fresh[0]
        plan2 = replace(
            plan,
            phase=Phase.PAIR_TRAP,
            fig_node=None,
            bindings=_b(g1=min(qb, y), g2=max(qb, y)),
        )
        return _decide(g, y, pb, "typeB-pull", plan2)
    if pb in opp and len(fresh) == 1:
        return _decide(g, qb, xb, "typeB-cut", main)
    if qb in opp and len(fresh) == 1:
        return _decide(g, pb, xb, "typeB-cut", main)
    if len(fresh) == 2:
        return _decide(g, pb, xb, "typeB-threat", main)
    raise UnmatchedPosition(f"three-stub endgame: move {opp} not covered")


def _pair_trap_respond(
    plan: AvoiderPlan, g: GameGraph, opp: MoveEdge
) -> tuple[StrategyDecision, AvoiderPlan]:
    """Two non-adjacent degree-2 vertices left in the lone component: joining
    them saturates it, and any escape through a fresh vertex gets capped into
    an eventual cut vertex."""
    wr = has_witness(g)
    if wr:
        plan2 = replace(plan, phase=Phase.MAIN, witness=wr)
        return _filler(g, plan2, "witness-hold")
    g1, g2 = plan.bound("g1"), plan.bound("g2")
    main = replace(plan, phase=Phase.MAIN, bindings=(), comp_pairs=())
    fresh = [e for e in opp if e not in (g1, g2) and _old_degree(g, opp, e) == 0]
    if len(fresh) == 1 and (g1 in opp or g2 in opp):
        z = fresh[0]
        other = g2 if g1 in opp else g1
        return _decide(g, other, z, "pair-trap-cut", main)
    return _decide(g, g1, g2, "pair-trap-close", main)


# ---------------------------------------------------------------------------
# Top-level dispatch
# ---------------------------------------------------------------------------

def avoider_respond(
    plan: AvoiderPlan,
    view: ComponentView,
    g: GameGraph,
    opp: Optional[MoveEdge],
) -> tuple[StrategyDecision, AvoiderPlan]:
    """One avoider turn: update the witness cache, run the active endgame
    script if armed, otherwise play the main response table for the state of
    the tracked component."""
    if next(iter_legal_moves(g), None) is None:
        raise NoLegalMove("game is over")

    if plan.witness is not None:
        assert witness_still_valid(g, plan.witness), "witness certificate decayed"
        return _filler(g, plan, "witness-hold")

    if plan.phase == Phase.CLAIM2_P1:
        return claim2_respond(plan, view, g, opp)
    if plan.phase == Phase.AFTER_LINK:
        wr = has_witness(g)
        if wr:
            plan2 = replace(plan, phase=Phase.MAIN, witness=wr)
            return _filler(g, plan2, "witness-hold")
        if opp is None:
            raise StrategyBreak("link follow-up without an opponent move")
        return _after_link_respond(plan, g, opp)
    if plan.phase in (Phase.FIG4, Phase.FIG5):
        return figure_tree_respond(plan, g, opp)
    if plan.phase == Phase.TYPE_A:
        return typeA_end(plan, g, opp)
    if plan.phase == Phase.TYPE_B:
        return typeB_end(plan, g, opp)
    if plan.phase == Phase.PAIR_TRAP:
        if opp is None:
            raise StrategyBreak("pair trap without an opponent move")
        return _pair_trap_respond(plan, g, opp)

    wr = has_witness(g)
    if wr:
        plan2 = replace(plan, witness=wr)
        return _filler(g, plan2, "witness-hold")

    state = classify_avoider_state(view, g)
    row = state.row

    if row == AvoiderRow.SMALL:
        iso = _isolated(g)
        free_c = [v for v in sorted(view.c_vertices) if g.degree(v) < 3]
        if iso and free_c:
            dec, plan2 = _decide(g, free_c[0], iso[0], "small", plan)
        else:
            dec, plan2 = _filler(g, plan, "fallback")
        return dec, _enter_claim2_if_ripe(plan2, g.with_edge(dec.edge.u, dec.edge.v))

    if row in (
        AvoiderRow.WITNESS_ALREADY,
        AvoiderRow.IMPOSSIBLE_1,
        AvoiderRow.IMPOSSIBLE_2,
        AvoiderRow.IMPOSSIBLE_3,
    ):
        return _filler(g, plan, "witness-hold")

    if row == AvoiderRow.ROW_A:
        m = move(state.bindings["a"], state.bindings["b"])
        rule = "row-a"
    elif row == AvoiderRow.ROW_B:
        # Join the two degree-2 vertices, stranding the degree-1 vertex as an
        # eventual cut vertex.  (Joining the degree-1 vertex to the far
        # degree-2 vertex instead would recreate the adjacent-pair shape and
        # lets the opponent pump the outside freedom back up, breaking the
        # descent argument; the stranding move wins on the spot.)
        m = move(state.bindings["u"], state.bindings["v"])
        rule = "row-b"
    elif row == AvoiderRow.ROW_C:
        m = _row_c_move(g, view, state.bindings["u"])
        rule = "row-c"
    elif row == AvoiderRow.ROW_D:
        m, rule = _row_d_move(g, view)
    elif row == AvoiderRow.ROW_E:
        m = _row_e_move(g, view, (state.bindings["u"], state.bindings["v"]))
        rule = "row-e"
    else:  # ROW_F: the endgame entry, on our turn.
        return claim2_respond(plan, view, g, None)

    if not is_legal(g, m):
        raise StrategyBreak(f"main-table move {m} for {rule} is illegal")
    dec = StrategyDecision(m, rule)
    plan2 = _enter_claim2_if_ripe(plan, g.with_edge(m.u, m.v))
    return dec, plan2


@dataclass(frozen=True)
class AvoiderPlayer:
    """Immutable game-ready handle over the avoider strategy."""

    plan: AvoiderPlan = field(default_factory=AvoiderPlan)

    @classmethod
    def for_initial(cls, g0: GameGraph) -> "AvoiderPlayer":
        root = None
        for v in range(g0.n):
            if g0.adj[v]:
                root = v
                break
        return cls(AvoiderPlan(root_x=root))

    def respond(
        self, g: GameGraph, opp: Optional[MoveEdge]
    ) -> tuple[StrategyDecision, "AvoiderPlayer"]:
        plan = self.plan
        if plan.root_x is None:
            if opp is None:
                if g.edge_count() != 0:
                    raise StrategyBreak("opening move expected an empty board")
                dec = StrategyDecision(move(0, 1), "open")
                return dec, AvoiderPlayer(replace(plan, root_x=0))
            plan = replace(plan, root_x=min(opp.u, opp.v))
        view = component_view(g, plan.root_x)
        dec, plan2 = avoider_respond(plan, view, g, opp)
        return dec, AvoiderPlayer(plan2)

    def state_key(self):
        p = self.plan
        wit = None
        if p.witness is not None:
            comp = 0
            for v in p.witness.component or ():
                comp |= 1 << v
            wit = (p.witness.kind, p.witness.vertex, comp)
        return (p.root_x, p.phase.value, p.fig_node, p.bindings, p.comp_pairs, wit)

    def canonical_colors(self) -> tuple[dict[int, int], bytes]:
        p = self.plan
        colors: dict[int, int] = {}
        if p.root_x is not None:
            colors[p.root_x] = 1
        for i, (_, v) in enumerate(p.bindings):
            colors[v] = i + 2
        extra = f"{p.phase.value}:{p.fig_node}:{p.witness is not None}".encode()
        return colors, extra

    def objective_secured(self, g: GameGraph) -> bool:
        return self.plan.witness is not None
