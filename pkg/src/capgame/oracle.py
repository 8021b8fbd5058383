"""Ground-truth computations for the degree-capped game.

Everything here is exact: a backtracking Hamilton-cycle finder, a
2-connectivity test, canonical forms for small graphs (color refinement plus
minimization over class-preserving relabelings), a full minimax solver for
tiny boards, and an exhaustive adversary that plays a strategy against every
possible opponent line with transposition and isomorphism pruning.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Protocol

from .graph_core import (
    GameGraph,
    MoveEdge,
    StrategyDecision,
    add_edge,
    bits,
    has_witness,
    is_legal,
    iter_legal_moves,
    reach_mask,
)


class TooLarge(Exception):
    """Instance exceeds the exact-computation bound."""


class Objective(Enum):
    FORCE_HAMILTONIAN = "force_hamiltonian"
    AVOID_HAMILTONIAN = "avoid_hamiltonian"
    AVOID_TWO_CONNECTED = "avoid_two_connected"


# ---------------------------------------------------------------------------
# Hamiltonicity and 2-connectivity
# ---------------------------------------------------------------------------

def hamilton_cycle(g: GameGraph) -> Optional[list[int]]:
    """A Hamilton cycle as a vertex list (closing edge implied), or None.

    Exhaustive backtracking anchored at vertex 0; cheap rejections first
    (fewer than 3 vertices, a vertex of degree < 2, disconnected).
    """
    n = g.n
    if n < 3:
        return None
    adj = g.adj
    for v in range(n):
        if adj[v].bit_count() < 2:
            return None
    full = g.full_mask()
    if reach_mask(adj, 0, full) != full:
        return None

    path = [0]
    visited = 1

    def extend() -> bool:
        nonlocal visited
        v = path[-1]
        if len(path) == n:
            return bool(adj[v] & 1)
        cand = adj[v] & ~visited
        while cand:
            low = cand & -cand
            cand ^= low
            u = low.bit_length() - 1
            path.append(u)
            visited |= low
            if extend():
                return True
            path.pop()
            visited ^= low
        return False

    return path if extend() else None


def is_two_connected(g: GameGraph) -> bool:
    """Connected, at least 3 vertices, and no cut vertex (over the whole
    fixed vertex pool, so isolated vertices disconnect the graph)."""
    n = g.n
    if n < 3:
        return False
    full = g.full_mask()
    if reach_mask(g.adj, 0, full) != full:
        return False
    for v in range(n):
        rest = full & ~(1 << v)
        start = (rest & -rest).bit_length() - 1
        if reach_mask(g.adj, start, rest) != rest:
            return False
    return True


# ---------------------------------------------------------------------------
# Canonical forms
# ---------------------------------------------------------------------------

def _refine_colors(g: GameGraph, base: list[int]) -> list[int]:
    colors = list(base)
    while True:
        keys = []
        for v in range(g.n):
            nbr = tuple(sorted(colors[u] for u in bits(g.adj[v])))
            keys.append((colors[v], nbr))
        order = {key: i for i, key in enumerate(sorted(set(keys)))}
        new = [order[k] for k in keys]
        if new == colors:
            return colors
        colors = new


def canonical_form(
    g: GameGraph,
    side=None,
    colors: Optional[dict[int, int]] = None,
    max_n: int = 8,
) -> bytes:
    """Canonical byte key of (graph, k, n, side, vertex coloring) up to
    color-preserving isomorphism.

    Color refinement narrows the candidate relabelings; the key then takes
    the minimum adjacency bit matrix over all refinement-class-preserving
    orderings, which is exact (the minimum matrix is itself a relabeled copy
    of the graph).
    """
    if g.n > max_n:
        raise TooLarge(f"canonical form bounded to n <= {max_n}, got {g.n}")
    base = [0] * g.n
    if colors:
        for v, c in colors.items():
            base[v] = c + 1
    refined = _refine_colors(g, base)
    classes: dict[int, list[int]] = {}
    for v in range(g.n):
        classes.setdefault(refined[v], []).append(v)
    class_ids = sorted(classes)
    sig = tuple((c, len(classes[c])) for c in class_ids)

    best = None
    pools = [itertools.permutations(classes[c]) for c in class_ids]
    for parts in itertools.product(*pools):
        order = [v for part in parts for v in part]
        pos = [0] * g.n
        for i, v in enumerate(order):
            pos[v] = i
        m = 0
        bit = 1
        for i in range(g.n):
            row = g.adj[order[i]]
            for j in range(i + 1, g.n):
                if row >> order[j] & 1:
                    m |= bit
                bit <<= 1
        if best is None or m < best:
            best = m
    return repr((g.n, g.k, side, sig, best)).encode()


# ---------------------------------------------------------------------------
# Exact minimax solver
# ---------------------------------------------------------------------------

@dataclass
class SolveResult:
    objective: Objective
    side: int
    mover_wins: bool
    principal_move: Optional[MoveEdge]
    nodes_expanded: int


def default_solve_bound(k: int) -> int:
    return 7 if k == 3 else 6


def _terminal_holds(g: GameGraph, objective: Objective) -> bool:
    if objective is Objective.FORCE_HAMILTONIAN:
        return hamilton_cycle(g) is not None
    if objective is Objective.AVOID_HAMILTONIAN:
        return hamilton_cycle(g) is None
    return not is_two_connected(g)


def _early_value(g: GameGraph, objective: Objective) -> Optional[bool]:
    """Sound mid-game cutoffs: a Hamilton cycle or 2-connectivity can never
    be destroyed by adding edges, and a cap-3 witness can never be repaired."""
    if objective is Objective.FORCE_HAMILTONIAN:
        if hamilton_cycle(g) is not None:
            return True
        return None
    if objective is Objective.AVOID_HAMILTONIAN:
        if hamilton_cycle(g) is not None:
            return False
        if g.k == 3 and has_witness(g):
            return True
        return None
    if is_two_connected(g):
        return False
    if g.k == 3 and has_witness(g):
        return True
    return None


def solve(
    g: GameGraph,
    side: int = 1,
    objective: Objective = Objective.FORCE_HAMILTONIAN,
    max_n: Optional[int] = None,
    use_cutoffs: bool = True,
) -> SolveResult:
    """Exact game value: can the player to move (who pursues ``objective``)
    force it against best play?  Memoized on canonical forms.
    """
    bound = max_n if max_n is not None else default_solve_bound(g.k)
    if g.n > bound:
        raise TooLarge(f"solver bounded to n <= {bound} for k = {g.k}")

    memo: dict = {}
    nodes = 0

    def value(gr: GameGraph, pursuer_to_move: bool) -> bool:
        nonlocal nodes
        nodes += 1
        if use_cutoffs:
            cut = _early_value(gr, objective)
            if cut is not None:
                return cut
        moves = list(iter_legal_moves(gr))
        if not moves:
            return _terminal_holds(gr, objective)
        key = (canonical_form(gr, side=pursuer_to_move, max_n=bound), pursuer_to_move)
        if key in memo:
            return memo[key]
        if pursuer_to_move:
            res = any(value(add_edge(gr, m), False) for m in moves)
        else:
            res = all(value(add_edge(gr, m), True) for m in moves)
        memo[key] = res
        return res

    mover_wins = value(g, True)
    root_moves = list(iter_legal_moves(g))
    principal = None
    if root_moves:
        principal = root_moves[0]
        if mover_wins:
            for m in root_moves:
                if value(add_edge(g, m), False):
                    principal = m
                    break
    return SolveResult(objective, side, mover_wins, principal, nodes)


# ---------------------------------------------------------------------------
# Exhaustive adversary
# ---------------------------------------------------------------------------

class StrategyPlayer(Protocol):
    """Immutable strategy handle: respond() returns the decision plus the
    successor handle, so game-tree branching can reuse snapshots."""

    def respond(self, g: GameGraph, opp: Optional[MoveEdge]) -> tuple[StrategyDecision, "StrategyPlayer"]: ...

    def state_key(self): ...

    def canonical_colors(self) -> tuple[dict[int, int], bytes]: ...

    def objective_secured(self, g: GameGraph) -> bool: ...


@dataclass
class StrategyFault:
    """A strategy exception together with the line of play that caused it."""

    line: tuple[MoveEdge, ...]
    error: str


@dataclass
class ExhaustReport:
    role: str
    first: str
    n: int
    k: int
    nodes_expanded: int = 0
    transposition_hits: int = 0
    isomorphism_hits: int = 0
    terminals: int = 0
    early_stops: int = 0
    successes: int = 0
    failures: list = field(default_factory=list)
    strategy_faults: list = field(default_factory=list)
    terminal_classes: dict = field(default_factory=dict)

    @property
    def all_ok(self) -> bool:
        return not self.failures and not self.strategy_faults

    def summary(self) -> str:
        return (
            f"role={self.role} first={self.first} n={self.n} k={self.k} "
            f"nodes={self.nodes_expanded} transpositions={self.transposition_hits} "
            f"isomorphism_pruned={self.isomorphism_hits} terminals={self.terminals} "
            f"early_stops={self.early_stops} failures={len(self.failures)} "
            f"faults={len(self.strategy_faults)}"
        )


def exhaust_adversary(
    player: StrategyPlayer,
    role: str,
    g0: GameGraph,
    first: str = "strategy",
    max_n: int = 8,
    prune_isomorphic: bool = True,
    early_stop: bool = True,
    max_nodes: Optional[int] = None,
    objective_holds: Optional[Callable[[GameGraph], bool]] = None,
) -> ExhaustReport:
    """Play ``player`` (as ``role``, moving first or second) against every
    opponent move sequence; prune transpositions exactly and, when the board
    fits the canonical bound, up to isomorphism.

    The objective check defaults to the role's goal: a Hamiltonian terminal
    for the builder, a non-2-connected terminal for the avoider.  Early
    stops are sound: a present Hamilton cycle or witness settles the line.
    """
    if g0.n > max_n and prune_isomorphic:
        prune_isomorphic = False
    if objective_holds is None:
        if role == "builder":
            objective_holds = lambda gr: hamilton_cycle(gr) is not None
        else:
            objective_holds = lambda gr: not is_two_connected(gr)

    report = ExhaustReport(role=role, first=first, n=g0.n, k=g0.k)
    seen: set = set()
    canon_seen: set = set()
    line: list[MoveEdge] = []

    def terminal(g: GameGraph) -> None:
        report.terminals += 1
        ok = objective_holds(g)
        if g.n <= max_n:
            key = canonical_form(g, max_n=max_n)
            report.terminal_classes[key] = ok
        if ok:
            report.successes += 1
        else:
            report.failures.append(tuple(line))

    def strategy_turn(g: GameGraph, p: StrategyPlayer, opp: Optional[MoveEdge]) -> None:
        try:
            decision, p2 = p.respond(g, opp)
            g2 = add_edge(g, decision.edge)
        except Exception as exc:  # noqa: BLE001 - faults are the payload here
            report.strategy_faults.append(StrategyFault(tuple(line), repr(exc)))
            return
        line.append(decision.edge)
        if next(iter_legal_moves(g2), None) is None:
            terminal(g2)
        else:
            opponent_turn(g2, p2)
        line.pop()

    def opponent_turn(g: GameGraph, p: StrategyPlayer) -> None:
        if early_stop and p.objective_secured(g):
            report.early_stops += 1
            report.successes += 1
            return
        key = (g.adj, p.state_key())
        if key in seen:
            report.transposition_hits += 1
            return
        seen.add(key)
        if prune_isomorphic:
            colors, extra = p.canonical_colors()
            ckey = (canonical_form(g, colors=colors, max_n=max_n), extra)
            if ckey in canon_seen:
                report.isomorphism_hits += 1
                return
            canon_seen.add(ckey)
        report.nodes_expanded += 1
        if max_nodes is not None and report.nodes_expanded > max_nodes:
            raise TooLarge(f"exhaust exceeded {max_nodes} nodes")
        for m in iter_legal_moves(g):
            g2 = add_edge(g, m)
            line.append(m)
            if next(iter_legal_moves(g2), None) is None:
                terminal(g2)
            else:
                strategy_turn(g2, p, m)
            line.pop()

    if first == "strategy":
        strategy_turn(g0, player, None)
    else:
        if next(iter_legal_moves(g0), None) is None:
            terminal(g0)
        else:
            opponent_turn(g0, player)
    return report
