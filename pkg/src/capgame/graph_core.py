"""Graph substrate for the degree-capped edge-drawing game.

Two players alternately add edges to a fixed pool of ``n`` vertices; no vertex
may ever exceed degree ``k``.  This module holds the immutable graph value used
everywhere else, move legality, the component decomposition around a tracked
root vertex, degree-of-freedom bookkeeping, and the two position features that
certify a cubic-cap game can never end Hamiltonian (an eventual cut vertex, or
a saturated proper component).

Adjacency is stored as one bitmask per vertex, which keeps component sweeps and
witness scans cheap at the sizes the simulations use (n <= 64).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple, Optional


class GraphError(Exception):
    """Base class for graph construction errors."""


class SelfLoop(GraphError):
    """Edge endpoints coincide."""


class OutOfRange(GraphError):
    """A vertex index is outside 0..n-1."""


class DuplicateEdge(GraphError):
    """The edge is already present."""


class DegreeCapExceeded(GraphError):
    """An endpoint already has degree k."""


class MoveEdge(NamedTuple):
    """An undirected edge, normalized so u < v."""

    u: int
    v: int


def move(u: int, v: int) -> MoveEdge:
    """Build a normalized MoveEdge (does not validate against a graph)."""
    if u == v:
        raise SelfLoop(f"self-loop at {u}")
    return MoveEdge(u, v) if u < v else MoveEdge(v, u)


@dataclass(frozen=True)
class GameGraph:
    """Simple undirected graph over vertices 0..n-1 with degree cap k.

    Immutable: ``with_edge`` returns a new value.  ``adj[v]`` is the neighbor
    bitmask of v.
    """

    n: int
    k: int
    adj: tuple[int, ...]

    @classmethod
    def empty(cls, n: int, k: int) -> "GameGraph":
        if n < 1 or k < 1:
            raise ValueError("need n >= 1 and k >= 1")
        return cls(n, k, (0,) * n)

    @classmethod
    def from_edges(cls, n: int, k: int, edges: Iterable[tuple[int, int]]) -> "GameGraph":
        g = cls.empty(n, k)
        for u, v in edges:
            g = add_edge(g, move(u, v))
        return g

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def degrees(self) -> list[int]:
        return [m.bit_count() for m in self.adj]

    def adjacent(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def with_edge(self, u: int, v: int) -> "GameGraph":
        adj = list(self.adj)
        adj[u] |= 1 << v
        adj[v] |= 1 << u
        return GameGraph(self.n, self.k, tuple(adj))

    def edges(self) -> list[MoveEdge]:
        out = []
        for u in range(self.n):
            rest = self.adj[u] >> (u + 1) << (u + 1)
            while rest:
                low = rest & -rest
                out.append(MoveEdge(u, low.bit_length() - 1))
                rest ^= low
        return out

    def edge_count(self) -> int:
        return sum(m.bit_count() for m in self.adj) // 2

    def isolated_mask(self) -> int:
        m = 0
        for v in range(self.n):
            if not self.adj[v]:
                m |= 1 << v
        return m

    def full_mask(self) -> int:
        return (1 << self.n) - 1


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bits(mask: int) -> list[int]:
    """Vertex indices set in a bitmask, ascending."""
    return list(_bits(mask))


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def reach_mask(adj: tuple[int, ...], start: int, allowed: int) -> int:
    """Bitmask of vertices reachable from start inside ``allowed``."""
    comp = (1 << start) & allowed
    frontier = comp
    while frontier:
        grow = 0
        for v in _bits(frontier):
            grow |= adj[v]
        frontier = grow & allowed & ~comp
        comp |= frontier
    return comp


def component_masks(g: GameGraph, allowed: Optional[int] = None) -> list[int]:
    """Connected components (as bitmasks) of the subgraph induced on ``allowed``."""
    if allowed is None:
        allowed = g.full_mask()
    comps = []
    rest = allowed
    while rest:
        start = (rest & -rest).bit_length() - 1
        comp = reach_mask(g.adj, start, allowed)
        comps.append(comp)
        rest &= ~comp
    return comps


# ---------------------------------------------------------------------------
# Moves
# ---------------------------------------------------------------------------

def check_move(g: GameGraph, m: MoveEdge) -> None:
    """Raise the specific error that makes m illegal in g, or return None."""
    u, v = m
    if u == v:
        raise SelfLoop(f"self-loop at {u}")
    if not (0 <= u < g.n and 0 <= v < g.n):
        raise OutOfRange(f"edge ({u},{v}) outside 0..{g.n - 1}")
    if g.adjacent(u, v):
        raise DuplicateEdge(f"edge ({u},{v}) already present")
    if g.degree(u) >= g.k or g.degree(v) >= g.k:
        raise DegreeCapExceeded(f"edge ({u},{v}) would exceed degree cap {g.k}")


def is_legal(g: GameGraph, m: MoveEdge) -> bool:
    u, v = m
    if u == v or not (0 <= u < g.n and 0 <= v < g.n) or g.adjacent(u, v):
        return False
    return g.degree(u) < g.k and g.degree(v) < g.k


def add_edge(g: GameGraph, m: MoveEdge) -> GameGraph:
    """Return g plus the edge m; all legality errors are raised as such."""
    check_move(g, m)
    return g.with_edge(m.u, m.v)


def legal_moves(g: GameGraph) -> set[MoveEdge]:
    """All edges that could be drawn now; empty exactly when the game is over."""
    free = [v for v in range(g.n) if g.degree(v) < g.k]
    out = set()
    for i, u in enumerate(free):
        for v in free[i + 1:]:
            if not g.adjacent(u, v):
                out.add(MoveEdge(u, v))
    return out


def iter_legal_moves(g: GameGraph) -> Iterator[MoveEdge]:
    """Legal moves in ascending (u, v) order."""
    free = [v for v in range(g.n) if g.degree(v) < g.k]
    for i, u in enumerate(free):
        for v in free[i + 1:]:
            if not g.adjacent(u, v):
                yield MoveEdge(u, v)


def game_over(g: GameGraph) -> bool:
    return next(iter_legal_moves(g), None) is None


# ---------------------------------------------------------------------------
# Component view around a tracked root
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ComponentView:
    """Partition of the vertex pool: the root's component C, the other
    non-isolated components D^j, and the isolated (degree-0) vertices.

    If the root itself is isolated, C is the singleton {root} and the root is
    excluded from ``isolated``.
    """

    root_x: int
    c_vertices: frozenset[int]
    d_components: tuple[frozenset[int], ...]
    isolated: frozenset[int]
    c_mask: int = field(repr=False, default=0)
    d_masks: tuple[int, ...] = field(repr=False, default=())


def component_view(g: GameGraph, root_x: int) -> ComponentView:
    if not 0 <= root_x < g.n:
        raise OutOfRange(f"root {root_x} outside 0..{g.n - 1}")
    iso = g.isolated_mask() & ~(1 << root_x)
    c_mask = reach_mask(g.adj, root_x, g.full_mask())
    d_masks = tuple(component_masks(g, g.full_mask() & ~iso & ~c_mask))
    return ComponentView(
        root_x=root_x,
        c_vertices=frozenset(_bits(c_mask)),
        d_components=tuple(frozenset(_bits(m)) for m in d_masks),
        isolated=frozenset(_bits(iso)),
        c_mask=c_mask,
        d_masks=d_masks,
    )


# ---------------------------------------------------------------------------
# Degrees of freedom
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FreedomStats:
    """Degrees of freedom of a vertex set under the cubic cap.

    f sums 3 - deg(v); e subtracts 2 per connected component covered by the
    set, so for a single component e = f - 2 and for unions e adds up.
    """

    f: int
    e: int


def freedom(g: GameGraph, vertices: Iterable[int]) -> FreedomStats:
    vmask = vertices if isinstance(vertices, int) else mask_of(vertices)
    f = sum(3 - g.degree(v) for v in _bits(vmask))
    ncomp = len(component_masks(g, vmask))
    return FreedomStats(f=f, e=f - 2 * ncomp)


def freedom_of_mask(g: GameGraph, vmask: int, ncomp: int) -> FreedomStats:
    """Freedom stats when the caller already knows the component count."""
    f = sum(3 - g.degree(v) for v in _bits(vmask))
    return FreedomStats(f=f, e=f - 2 * ncomp)


# ---------------------------------------------------------------------------
# Non-Hamiltonicity witnesses (cubic cap only)
# ---------------------------------------------------------------------------

def is_eventual_cut_vertex(g: GameGraph, x: int) -> bool:
    """True iff some component S of g minus x has every vertex at degree 3
    (in g) while x has one or two neighbors in S.

    Such an S is frozen for the rest of a cap-3 game, so x is destined to be
    a cut vertex of any completion that connects S to anything else.
    """
    if not 0 <= x < g.n:
        raise OutOfRange(f"vertex {x} outside 0..{g.n - 1}")
    allowed = g.full_mask() & ~(1 << x)
    rest = g.adj[x]
    seen = 0
    # Only components that actually touch x can qualify.
    while rest:
        start = (rest & -rest).bit_length() - 1
        rest &= rest - 1
        if seen >> start & 1:
            continue
        comp = reach_mask(g.adj, start, allowed)
        seen |= comp
        nbrs_in = (g.adj[x] & comp).bit_count()
        if nbrs_in in (1, 2) and all(g.degree(v) == 3 for v in _bits(comp)):
            return True
    return False


@dataclass(frozen=True)
class WitnessReport:
    """Certificate that no legal completion of a cap-3 position is Hamiltonian.

    kind is ``"eventual_cut_vertex"`` (vertex set to the cut vertex, component
    to its frozen side) or ``"three_regular_component"`` (component set to the
    saturated proper component), or None when the position certifies nothing.
    """

    kind: Optional[str]
    vertex: Optional[int] = None
    component: Optional[frozenset[int]] = None

    def __bool__(self) -> bool:
        return self.kind is not None


NO_WITNESS = WitnessReport(kind=None)


def _saturated_components(g: GameGraph) -> list[int]:
    t_mask = 0
    for v in range(g.n):
        if g.degree(v) == 3:
            t_mask |= 1 << v
    return component_masks(g, t_mask) if t_mask else []


def has_witness(g: GameGraph) -> WitnessReport:
    """Scan a cap-3 position for a feature that already rules out every
    Hamiltonian completion.

    (a) an eventual cut vertex x whose frozen side S leaves at least one
        vertex outside S + x (that vertex can never ride a cycle through S);
    (b) a fully saturated (3-regular) component while other vertices exist.

    Both features persist under any further edge additions, so a firing
    report stays valid for the rest of the game.
    """
    full = g.full_mask()
    sat_comps = _saturated_components(g)
    for comp in sat_comps:
        boundary = 0
        for v in _bits(comp):
            boundary |= g.adj[v]
        boundary &= ~comp
        if boundary == 0:
            if comp != full:
                return WitnessReport(
                    kind="three_regular_component",
                    component=frozenset(_bits(comp)),
                )
        elif boundary.bit_count() == 1:
            x = boundary.bit_length() - 1
            nbrs_in = (g.adj[x] & comp).bit_count()
            if nbrs_in in (1, 2) and (comp | 1 << x) != full:
                return WitnessReport(
                    kind="eventual_cut_vertex",
                    vertex=x,
                    component=frozenset(_bits(comp)),
                )
    # A saturated vertex can itself be an eventual cut vertex: removing it may
    # split its saturated region into a piece bordered by nothing else.
    for comp in sat_comps:
        if comp.bit_count() < 2:
            continue
        for x in _bits(comp):
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
                out_boundary = 0
                for v in _bits(side):
                    out_boundary |= g.adj[v]
                out_boundary &= ~side & ~(1 << x)
                nbrs_in = (g.adj[x] & side).bit_count()
                if out_boundary == 0 and nbrs_in in (1, 2) and (side | 1 << x) != full:
                    return WitnessReport(
                        kind="eventual_cut_vertex",
                        vertex=x,
                        component=frozenset(_bits(side)),
                    )
    return NO_WITNESS


def witness_still_valid(g: GameGraph, w: WitnessReport) -> bool:
    """Cheap recheck that a previously found witness still certifies g."""
    if not w:
        return False
    comp = mask_of(w.component)
    full = g.full_mask()
    if any(g.degree(v) != 3 for v in _bits(comp)):
        return False
    if w.kind == "three_regular_component":
        return comp != full
    x = w.vertex
    return (g.adj[x] & comp).bit_count() in (1, 2) and (comp | 1 << x) != full


# ---------------------------------------------------------------------------
# Strategy decisions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StrategyDecision:
    """A chosen edge plus the rule tag that produced it."""

    edge: MoveEdge
    rule: str

    def to_json(self) -> str:
        return json.dumps({"edge": [self.edge.u, self.edge.v], "rule": self.rule})


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def to_text(g: GameGraph) -> str:
    """Plain text form: first line "n k", then one "u v" line per edge."""
    lines = [f"{g.n} {g.k}"]
    lines.extend(f"{e.u} {e.v}" for e in g.edges())
    return "\n".join(lines) + "\n"


def from_text(text: str) -> GameGraph:
    rows = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not rows or len(rows[0]) != 2:
        raise GraphError("expected header line 'n k'")
    n, k = (int(t) for t in rows[0])
    return GameGraph.from_edges(n, k, ((int(a), int(b)) for a, b in rows[1:]))


def to_json(g: GameGraph) -> str:
    edges = sorted((e.u, e.v) for e in g.edges())
    return json.dumps({"n": g.n, "k": g.k, "edges": [list(e) for e in edges]})


def from_json(text: str) -> GameGraph:
    d = json.loads(text)
    return GameGraph.from_edges(d["n"], d["k"], ((u, v) for u, v in d["edges"]))


def load_graph(text: str) -> GameGraph:
    """Parse either serialized graph form (JSON object or plain text)."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return from_json(text)
    return from_text(text)
