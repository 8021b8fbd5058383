"""Shared graph constructors for the named shapes."""

from __future__ import annotations

import random

from capgame.graph_core import GameGraph, reach_mask

# K4 on {0,1,2,3} with edge (1,2) subdivided into 1-4-5-2: saturated except
# the adjacent degree-2 pair {4,5}.
TYPE_H_EDGES = [(0, 1), (0, 2), (0, 3), (1, 3), (2, 3), (1, 4), (4, 5), (5, 2)]

# Same with the 4-5 edge removed: two non-adjacent degree-1 vertices.
TYPE_X_EDGES = [e for e in TYPE_H_EDGES if e != (4, 5)]

# Type H plus a pendant hanging off 4: degree-1 vertex 6, degree-2 vertex 5.
TYPE_Y_EDGES = TYPE_H_EDGES + [(4, 6)]

# K4 with (0,1) subdivided into 0-4-5-1 and (2,3) subdivided into 2-6-3:
# degree-2 vertices {4,5,6} with exactly 4~5 adjacent.
TYPE_B_EDGES = [(0, 2), (0, 3), (1, 2), (1, 3), (0, 4), (4, 5), (5, 1), (2, 6), (6, 3)]

# K4 minus the edge (0,1): saturated except the non-adjacent pair {0,1}.
DIAMOND_EDGES = [(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]

CUBE_EDGES = [(i, i ^ b) for i in range(8) for b in (1, 2, 4) if i < (i ^ b)]

K4_EDGES = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


def graph(n: int, k: int, edges) -> GameGraph:
    return GameGraph.from_edges(n, k, edges)


def shifted(edges, offset: int):
    return [(u + offset, v + offset) for u, v in edges]


def type_h(n: int = 6, k: int = 3) -> GameGraph:
    return graph(n, k, TYPE_H_EDGES)


def diamond_plus_apex(n: int = 5, k: int = 3) -> GameGraph:
    """Diamond with an apex joined to both degree-2 corners: the apex is an
    eventual cut vertex."""
    return graph(n, k, DIAMOND_EDGES + [(0, 4), (1, 4)])


def random_cubic_minus_two_edges(m: int, rng: random.Random, n=None):
    """A connected graph on m vertices (m even), 3-regular except exactly
    four degree-2 vertices, built by deleting two disjoint edges from a
    random simple connected cubic graph.  Returns None on a failed attempt."""
    stubs = [v for v in range(m) for _ in range(3)]
    rng.shuffle(stubs)
    edges = set()
    ok = True
    for i in range(0, len(stubs), 2):
        u, v = stubs[i], stubs[i + 1]
        if u == v or (min(u, v), max(u, v)) in edges:
            ok = False
            break
        edges.add((min(u, v), max(u, v)))
    if not ok:
        return None
    g = GameGraph.from_edges(n or m, 3, edges)
    if reach_mask(g.adj, 0, (1 << m) - 1) != (1 << m) - 1:
        return None
    edge_list = sorted(edges)
    rng.shuffle(edge_list)
    for i, e1 in enumerate(edge_list):
        for e2 in edge_list[i + 1:]:
            if len({*e1, *e2}) != 4:
                continue
            kept = [e for e in edges if e not in (e1, e2)]
            g2 = GameGraph.from_edges(n or m, 3, kept)
            if reach_mask(g2.adj, 0, (1 << m) - 1) == (1 << m) - 1:
                return g2, sorted({*e1, *e2})
    return None
