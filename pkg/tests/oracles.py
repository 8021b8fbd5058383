"""Independent reference oracles for the test suite.

Deliberately naive and separate from the package implementation: plain
dict-of-sets graphs, permutation search for Hamilton cycles, unmemoized
minimax with no canonicalization, and exhaustive completion search.  These
are the second route for every dual-route check.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Optional

from capgame.graph_core import GameGraph, add_edge, iter_legal_moves, move
from capgame.oracle import hamilton_cycle


def adj_sets(g: GameGraph) -> dict[int, set[int]]:
    return {v: {u for u in range(g.n) if g.adj[v] >> u & 1} for v in range(g.n)}


def naive_components(g: GameGraph, vertices: Optional[Iterable[int]] = None) -> list[set[int]]:
    verts = set(range(g.n)) if vertices is None else set(vertices)
    nbrs = adj_sets(g)
    comps = []
    left = set(verts)
    while left:
        start = left.pop()
        comp = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for u in nbrs[v] & verts:
                if u not in comp:
                    comp.add(u)
                    stack.append(u)
        comps.append(comp)
        left -= comp
    return comps


def hamiltonian_by_permutations(g: GameGraph) -> bool:
    """Ground-truth Hamiltonicity for n <= 8: try every vertex order."""
    n = g.n
    if n < 3:
        return False
    assert n <= 8, "permutation oracle bounded to n <= 8"
    for perm in itertools.permutations(range(1, n)):
        order = (0,) + perm
        if all(
            g.adjacent(order[i], order[(i + 1) % n]) for i in range(n)
        ):
            return True
    return False


def naive_eventual_cut_vertex(g: GameGraph, x: int) -> bool:
    """The definition, verbatim: some component S of g-minus-x has all its
    vertices at degree 3 in g while x has one or two neighbors in S."""
    others = set(range(g.n)) - {x}
    nbrs = adj_sets(g)
    for comp in naive_components(g, others):
        in_s = len(nbrs[x] & comp)
        if in_s in (1, 2) and all(len(nbrs[v]) == 3 for v in comp):
            return True
    return False


def naive_two_connected(g: GameGraph) -> bool:
    if g.n < 3:
        return False
    if len(naive_components(g)) != 1:
        return False
    for v in range(g.n):
        if len(naive_components(g, set(range(g.n)) - {v})) != 1:
            return False
    return True


# ---------------------------------------------------------------------------
# Unmemoized minimax (no transposition table, no canonicalization)
# ---------------------------------------------------------------------------

def brute_force_values(n: int, k: int) -> dict[str, bool]:
    """One full-tree pass from the empty board: can the player to move force
    each terminal predicate?  No memoization and no pruning; the only cache
    is of the terminal predicate itself (a pure function of the final graph).

    Returns {"force_hamiltonian", "avoid_hamiltonian", "avoid_two_connected"}.
    """
    adj = [0] * n
    deg = [0] * n
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    terminal_cache: dict[tuple[int, ...], tuple[bool, bool]] = {}

    def terminal_predicates() -> tuple[bool, bool]:
        key = tuple(adj)
        hit = terminal_cache.get(key)
        if hit is None:
            g = GameGraph(n, k, key)
            hit = (
                hamilton_cycle(g) is not None,
                naive_two_connected(g),
            )
            terminal_cache[key] = hit
        return hit

    def rec(mover_is_pursuer: bool) -> tuple[bool, bool, bool]:
        moves = [
            (u, v)
            for u, v in pairs
            if deg[u] < k and deg[v] < k and not adj[u] >> v & 1
        ]
        if not moves:
            ham, two = terminal_predicates()
            return ham, not ham, not two
        results = []
        for u, v in moves:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
            deg[u] += 1
            deg[v] += 1
            results.append(rec(not mover_is_pursuer))
            adj[u] &= ~(1 << v)
            adj[v] &= ~(1 << u)
            deg[u] -= 1
            deg[v] -= 1
        combine = any if mover_is_pursuer else all
        return tuple(combine(r[i] for r in results) for i in range(3))

    f, a, t = rec(True)
    return {
        "force_hamiltonian": f,
        "avoid_hamiltonian": a,
        "avoid_two_connected": t,
    }


# ---------------------------------------------------------------------------
# Completion search (witness soundness)
# ---------------------------------------------------------------------------

def some_completion_hamiltonian(g: GameGraph) -> bool:
    """True iff some supergraph of g on the same vertex pool, still under the
    cap, has a Hamilton cycle.  Since added edges never destroy a cycle, only
    the maximal completions need testing."""
    seen: set[tuple[int, ...]] = set()

    def rec(gr: GameGraph) -> bool:
        if gr.adj in seen:
            return False
        seen.add(gr.adj)
        moves = list(iter_legal_moves(gr))
        if not moves:
            return hamilton_cycle(gr) is not None
        return any(rec(add_edge(gr, m)) for m in moves)

    return rec(g)


def all_graphs_maxdeg3(n: int):
    """Every labeled graph on n vertices with maximum degree 3."""
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    for mask in range(1 << len(pairs)):
        deg = [0] * n
        ok = True
        edges = []
        m = mask
        while m:
            low = m & -m
            u, v = pairs[low.bit_length() - 1]
            deg[u] += 1
            deg[v] += 1
            if deg[u] > 3 or deg[v] > 3:
                ok = False
                break
            edges.append((u, v))
            m ^= low
        if ok:
            yield GameGraph.from_edges(n, 3, edges)
