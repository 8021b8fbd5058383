"""Recognizers for the structural shapes the cubic-cap avoider reasons about.

A connected component of a cap-3 position is classified by its degree census:
fully saturated (3-regular), saturated except an adjacent degree-2 pair,
except three degree-2 vertices with exactly one adjacent pair, except two
non-adjacent degree-1 vertices, or except a non-adjacent degree-1/degree-2
pair.  One whole-graph shape matters too: a lone single-edge component next to
components that are each saturated except a non-adjacent degree-2 pair.

The avoider's move selection keys off a second classification: the state of
the tracked component C, expressed as the row of the response table that
applies (or one of the terminal/impossible situations, each of which already
certifies the game).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .graph_core import (
    ComponentView,
    GameGraph,
    bits,
    component_masks,
    mask_of,
    reach_mask,
)


class NotAComponent(Exception):
    """The vertex set passed in is not a connected component of the graph."""


class GraphShape(Enum):
    TYPE_H = "type_H"
    TYPE_A = "type_A"
    TYPE_B = "type_B"
    TYPE_X = "type_X"
    TYPE_Y = "type_Y"
    THREE_REGULAR = "three_regular"
    OTHER = "other"


# Sub-tag on OTHER: saturated except two non-adjacent degree-2 vertices.
# These components are the building blocks of the whole-graph TYPE_A shape.
SPREAD_PAIR = "deg2_pair_nonadjacent"


@dataclass(frozen=True)
class TypeLabel:
    """A shape label plus the distinguished vertices that witness it."""

    label: GraphShape
    evidence: tuple[int, ...] = ()
    subtype: Optional[str] = None

    def to_dict(self) -> dict:
        return {"label": self.label.value, "evidence": list(self.evidence)}


def _census(g: GameGraph, comp: list[int]) -> tuple[list[int], list[int], bool]:
    """Degree-1 and degree-2 vertices of comp; flag whether the rest are 3."""
    deg1, deg2, clean = [], [], True
    for v in comp:
        d = g.degree(v)
        if d == 1:
            deg1.append(v)
        elif d == 2:
            deg2.append(v)
        elif d != 3:
            clean = False
    return deg1, deg2, clean


def classify_component(g: GameGraph, comp) -> TypeLabel:
    """Classify one connected component of g.

    comp may be an iterable of vertices or a bitmask.  The five named shapes
    are mutually exclusive (their degree censuses differ), so at most one
    matches; everything else is OTHER, with a sub-tag when the component is
    saturated except a non-adjacent degree-2 pair.
    """
    cmask = comp if isinstance(comp, int) else mask_of(comp)
    if cmask == 0:
        raise NotAComponent("empty vertex set")
    start = (cmask & -cmask).bit_length() - 1
    if reach_mask(g.adj, start, g.full_mask()) != cmask:
        raise NotAComponent("vertex set is not a maximal connected component")

    vs = bits(cmask)
    deg1, deg2, clean = _census(g, vs)
    if not clean:
        return TypeLabel(GraphShape.OTHER)

    if not deg1 and not deg2:
        return TypeLabel(GraphShape.THREE_REGULAR)
    if not deg1 and len(deg2) == 2:
        p, q = deg2
        if g.adjacent(p, q):
            return TypeLabel(GraphShape.TYPE_H, (p, q))
        return TypeLabel(GraphShape.OTHER, (p, q), subtype=SPREAD_PAIR)
    if not deg1 and len(deg2) == 3:
        adj_pairs = [
            (a, b)
            for i, a in enumerate(deg2)
            for b in deg2[i + 1:]
            if g.adjacent(a, b)
        ]
        if len(adj_pairs) == 1:
            p, q = adj_pairs[0]
            x = next(v for v in deg2 if v not in adj_pairs[0])
            return TypeLabel(GraphShape.TYPE_B, (p, q, x))
        return TypeLabel(GraphShape.OTHER)
    if len(deg1) == 2 and not deg2:
        a, b = deg1
        if not g.adjacent(a, b):
            return TypeLabel(GraphShape.TYPE_X, (a, b))
        return TypeLabel(GraphShape.OTHER)
    if len(deg1) == 1 and len(deg2) == 1:
        a, b = deg1[0], deg2[0]
        if not g.adjacent(a, b):
            return TypeLabel(GraphShape.TYPE_Y, (a, b))
        return TypeLabel(GraphShape.OTHER)
    return TypeLabel(GraphShape.OTHER)


@dataclass(frozen=True)
class TypeAEvidence:
    """Whole-graph match result for the single-edge-plus-spread-pairs shape."""

    matches: bool
    single_edge: Optional[tuple[int, int]] = None
    pairs: tuple[tuple[int, int], ...] = ()

    def __bool__(self) -> bool:
        return self.matches


def classify_graph_typeA(g: GameGraph) -> TypeAEvidence:
    """True iff, ignoring isolated vertices, exactly one component is a single
    edge and every other component is saturated except two non-adjacent
    degree-2 vertices.
    """
    nonisolated = g.full_mask() & ~g.isolated_mask()
    single: Optional[tuple[int, int]] = None
    pairs: list[tuple[int, int]] = []
    for cmask in component_masks(g, nonisolated):
        vs = bits(cmask)
        if len(vs) == 2:
            if single is not None:
                return TypeAEvidence(False)
            single = (vs[0], vs[1])
            continue
        label = classify_component(g, cmask)
        if label.subtype != SPREAD_PAIR:
            return TypeAEvidence(False)
        pairs.append((label.evidence[0], label.evidence[1]))
    if single is None:
        return TypeAEvidence(False)
    return TypeAEvidence(True, single, tuple(sorted(pairs)))


# ---------------------------------------------------------------------------
# Avoider state rows
# ---------------------------------------------------------------------------

class AvoiderRow(Enum):
    SMALL = "small"
    ROW_A = "row-a"
    ROW_B = "row-b"
    ROW_C = "row-c"
    ROW_D = "row-d"
    ROW_E = "row-e"
    ROW_F = "row-f"
    WITNESS_ALREADY = "witness-already"
    IMPOSSIBLE_1 = "impossible-1"
    IMPOSSIBLE_2 = "impossible-2"
    IMPOSSIBLE_3 = "impossible-3"


@dataclass(frozen=True)
class AvoiderState:
    row: AvoiderRow
    bindings: dict = field(default_factory=dict)


def find_eventual_cut_vertex(g: GameGraph, within: Optional[int] = None):
    """Fast scan for an eventual cut vertex, optionally restricted to a mask.

    Returns (x, side_mask) or None.  A frozen side S must consist of
    saturated vertices whose only outside neighbor is x, so it suffices to
    sweep the components of the saturated subgraph and, inside each, the
    splits produced by removing one saturated vertex.
    """
    scope = g.full_mask() if within is None else within
    t_mask = 0
    for v in bits(scope):
        if g.degree(v) == 3:
            t_mask |= 1 << v
    if not t_mask:
        return None
    for comp in component_masks(g, t_mask):
        boundary = 0
        for v in bits(comp):
            boundary |= g.adj[v]
        boundary &= ~comp
        if boundary.bit_count() == 1:
            x = boundary.bit_length() - 1
            if (g.adj[x] & comp).bit_count() in (1, 2):
                return x, comp
    for comp in component_masks(g, t_mask):
        if comp.bit_count() < 2:
            continue
        for x in bits(comp):
            allowed = comp & ~(1 << x)
            rest = g.adj[x] & comp
            seen = 0
            while rest:
                start = (rest & -rest).bit_length() - 1
                rest &= rest - 1
                if seen >> start & 1:
                    continue
                side = reach_mask(g.adj, start, allowed)
                seen |= side
                out = 0
                for v in bits(side):
                    out |= g.adj[v]
                out &= ~side & ~(1 << x)
                if out == 0 and (g.adj[x] & side).bit_count() in (1, 2):
                    return x, side
    return None


def effective_freedom_of_d(view: ComponentView, g: GameGraph) -> int:
    """Sum of per-component effective freedom over the D components."""
    total = 0
    for dmask in view.d_masks:
        total += sum(3 - g.degree(v) for v in bits(dmask)) - 2
    return total


def classify_avoider_state(view: ComponentView, g: GameGraph) -> AvoiderState:
    """Map the tracked component C (plus the freedom left in D) to the row of
    the avoider's response table, in table order.

    The impossible cases and an already-present eventual cut vertex are
    reported ahead of the rows; all of them certify the final graph, so the
    caller just holds the position.  Every connected C is covered: with no
    degree-1 vertex the degree-2 count drives the split, and three or more
    degree-2 vertices in a connected component always contain a non-adjacent
    pair.
    """
    cvs = sorted(view.c_vertices)
    if len(cvs) < 4:
        return AvoiderState(AvoiderRow.SMALL)

    deg1, deg2, _ = _census(g, cvs)
    deficient = len(deg1) + len(deg2)
    if deficient == 0:
        return AvoiderState(AvoiderRow.IMPOSSIBLE_1)
    if deficient == 1:
        v = (deg1 + deg2)[0]
        return AvoiderState(AvoiderRow.IMPOSSIBLE_2, {"v": v})
    if len(deg1) == 1 and len(deg2) == 1 and g.adjacent(deg1[0], deg2[0]):
        return AvoiderState(
            AvoiderRow.IMPOSSIBLE_3, {"u": deg1[0], "v": deg2[0]}
        )

    found = find_eventual_cut_vertex(g, view.c_mask)
    if found is not None:
        return AvoiderState(AvoiderRow.WITNESS_ALREADY, {"x": found[0]})

    if len(deg1) > 1:
        return AvoiderState(AvoiderRow.ROW_A, {"a": deg1[0], "b": deg1[1]})
    if len(deg1) == 1:
        w = deg1[0]
        if len(deg2) == 2:
            u, v = deg2
            if not g.adjacent(u, v):
                nbr = g.adj[w]
                if nbr >> u & 1:
                    return AvoiderState(AvoiderRow.ROW_B, {"w": w, "u": u, "v": v})
                if nbr >> v & 1:
                    return AvoiderState(AvoiderRow.ROW_B, {"w": w, "u": v, "v": u})
            return AvoiderState(AvoiderRow.ROW_C, {"u": w, "v": u, "w": v})
        return AvoiderState(AvoiderRow.ROW_C, {"u": w})

    # No degree-1 vertices from here on.
    nonadj = [
        (a, b)
        for i, a in enumerate(deg2)
        for b in deg2[i + 1:]
        if not g.adjacent(a, b)
    ]
    if nonadj:
        return AvoiderState(AvoiderRow.ROW_D, {"p": nonadj[0][0], "q": nonadj[0][1]})

    # Exactly two degree-2 vertices, adjacent: the component is the
    # saturated-except-adjacent-pair shape.  Split on the freedom left in D.
    u, v = deg2
    if effective_freedom_of_d(view, g) != 0:
        return AvoiderState(AvoiderRow.ROW_E, {"u": u, "v": v})
    return AvoiderState(AvoiderRow.ROW_F, {"u": u, "v": v})
