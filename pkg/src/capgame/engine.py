"""Game orchestration: alternation, legality, opponents, traces, monitors.

A game is a sequence of validated moves from an optional initial graph until
no legal edge remains.  One side may be driven by a strategy (builder or
avoider); the other side is an opponent (seeded random, greedy, solver-backed,
or scripted).  Every move is recorded together with a position snapshot
(freedom of the tracked component, effective freedom outside it, component
shape labels, and the persistent witness, all for cap-3 games), and the trace
serializes to JSON lines that replay byte-identically.

The monitors re-derive the potential-function bookkeeping from a trace: the
non-increase of F(C) + E(D) across the avoider's in-component moves (with
equality exactly at isolated-isolated replies), the descent schedule of E(D)
across adjacent-pair occurrences of C, the guaranteed arrival of a terminal
feature, and the shape the main-table moves must never leave behind.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional

from . import graph_core as gc
from .avoider_strategy import AvoiderPlayer
from .builder_strategy import BuilderPlayer, check_path_invariants
from .classify import GraphShape, classify_component, find_eventual_cut_vertex
from .graph_core import (
    GameGraph,
    MoveEdge,
    WitnessReport,
    add_edge,
    bits,
    component_view,
    has_witness,
    is_legal,
    iter_legal_moves,
    move,
    witness_still_valid,
)
from .oracle import (
    Objective,
    default_solve_bound,
    hamilton_cycle,
    is_two_connected,
    solve,
)


class IllegalMoveByOpponent(Exception):
    """A scripted or interactive move failed validation."""


class ScriptExhausted(Exception):
    """The scripted opponent ran out of moves."""


class ParseError(Exception):
    """A trace file does not parse into the expected record shapes."""


class ReplayMismatch(Exception):
    """Replaying a trace did not reproduce a recorded snapshot."""


# ---------------------------------------------------------------------------
# Configuration and trace records
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OpponentSpec:
    kind: str = "random"         # random | greedy | solver | scripted | interactive
    seed: Optional[int] = None
    moves: tuple[tuple[int, int], ...] = ()


@dataclass(frozen=True)
class GameConfig:
    n: int
    k: int
    role: Optional[str] = None   # builder | avoider | None
    first: str = "strategy"      # strategy | opponent
    opponent: OpponentSpec = field(default_factory=OpponentSpec)
    initial_edges: tuple[tuple[int, int], ...] = ()
    n0_threshold: int = 24
    game_id: int = 0

    def to_header(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "role": self.role,
            "first": self.first,
            "opponent": {
                "kind": self.opponent.kind,
                "seed": self.opponent.seed,
                "moves": [list(m) for m in self.opponent.moves],
            },
            "initial_edges": [list(e) for e in self.initial_edges],
            "n0": self.n0_threshold,
            "game": self.game_id,
        }

    @classmethod
    def from_header(cls, d: dict) -> "GameConfig":
        opp = d.get("opponent", {})
        return cls(
            n=d["n"],
            k=d["k"],
            role=d.get("role"),
            first=d.get("first", "strategy"),
            opponent=OpponentSpec(
                kind=opp.get("kind", "random"),
                seed=opp.get("seed"),
                moves=tuple(tuple(m) for m in opp.get("moves", [])),
            ),
            initial_edges=tuple(tuple(e) for e in d.get("initial_edges", [])),
            n0_threshold=d.get("n0", 24),
            game_id=d.get("game", 0),
        )


@dataclass(frozen=True)
class MoveRecord:
    index: int
    player: int            # 1 or 2 (1 moved first)
    edge: MoveEdge
    rule: str
    f_c: Optional[int]
    e_d: Optional[int]
    labels: tuple[str, ...]
    witness: Optional[tuple[str, int]]   # (kind, anchor vertex)

    def to_dict(self) -> dict:
        return {
            "i": self.index,
            "player": self.player,
            "edge": [self.edge.u, self.edge.v],
            "rule": self.rule,
            "F_C": self.f_c,
            "E_D": self.e_d,
            "labels": list(self.labels),
            "witness": None
            if self.witness is None
            else {"kind": self.witness[0], "at": self.witness[1]},
        }


@dataclass
class GameTrace:
    config: GameConfig
    records: list[MoveRecord]
    terminal: dict

    def jsonl_lines(self) -> list[str]:
        lines = [json.dumps(self.config.to_header(), sort_keys=True)]
        lines.extend(json.dumps(r.to_dict(), sort_keys=True) for r in self.records)
        lines.append(json.dumps({"terminal": self.terminal}, sort_keys=True))
        return lines

    def final_graph(self) -> GameGraph:
        g = GameGraph.from_edges(self.config.n, self.config.k, self.config.initial_edges)
        for r in self.records:
            g = add_edge(g, r.edge)
        return g


def write_traces(path: str, traces: Iterable[GameTrace]) -> None:
    with open(path, "w") as fh:
        for t in traces:
            for line in t.jsonl_lines():
                fh.write(line + "\n")


def parse_traces(text: str) -> list[GameTrace]:
    """Parse one or more concatenated trace blocks from JSON-lines text."""
    traces: list[GameTrace] = []
    config = None
    records: list[MoveRecord] = []
    for ln, raw in enumerate(text.splitlines(), 1):
        raw = raw.strip()
        if not raw:
            continue
        try:
            d = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ParseError(f"line {ln}: {exc}") from exc
        if "terminal" in d:
            if config is None:
                raise ParseError(f"line {ln}: terminal before header")
            traces.append(GameTrace(config, records, d["terminal"]))
            config, records = None, []
        elif "edge" in d:
            if config is None:
                raise ParseError(f"line {ln}: move before header")
            try:
                wit = d["witness"]
                records.append(
                    MoveRecord(
                        index=d["i"],
                        player=d["player"],
                        edge=MoveEdge(d["edge"][0], d["edge"][1]),
                        rule=d["rule"],
                        f_c=d["F_C"],
                        e_d=d["E_D"],
                        labels=tuple(d["labels"]),
                        witness=None if wit is None else (wit["kind"], wit["at"]),
                    )
                )
            except (KeyError, IndexError, TypeError) as exc:
                raise ParseError(f"line {ln}: bad move record ({exc})") from exc
        elif "n" in d:
            if config is not None:
                raise ParseError(f"line {ln}: header inside an open trace")
            config = GameConfig.from_header(d)
        else:
            raise ParseError(f"line {ln}: unrecognized record")
    if config is not None:
        raise ParseError("trace ended without a terminal record")
    return traces


# ---------------------------------------------------------------------------
# Opponents
# ---------------------------------------------------------------------------

def _greedy_anti_builder_score(g: GameGraph, m: MoveEdge) -> tuple:
    # Saturate the sparse fringe: prefer edges between low-degree vertices
    # already on the board (the path ends live there).
    both_placed = g.adj[m.u] != 0 and g.adj[m.v] != 0
    return (0 if both_placed else 1, g.degree(m.u) + g.degree(m.v))


def _greedy_anti_avoider_score(g: GameGraph, m: MoveEdge) -> tuple:
    # Push toward one well-connected blob: merging two placed components
    # first, then growing a component, then fresh edges, then chords.
    u_placed, v_placed = g.adj[m.u] != 0, g.adj[m.v] != 0
    if u_placed and v_placed:
        same = bool(gc.reach_mask(g.adj, m.u, g.full_mask()) >> m.v & 1)
        return (3, 0) if same else (0, 0)
    if u_placed or v_placed:
        return (1, -(g.degree(m.u) + g.degree(m.v)))
    return (2, 0)


class _Opponent:
    """Stateful opponent shared across one game (rng stream, script cursor)."""

    def __init__(self, spec: OpponentSpec, role_opposed: Optional[str]):
        self.spec = spec
        self.role_opposed = role_opposed
        self.rng = random.Random(spec.seed if spec.seed is not None else 0)
        self.cursor = 0

    def next_move(self, g: GameGraph) -> MoveEdge:
        kind = self.spec.kind
        legal = sorted(iter_legal_moves(g))
        if not legal:
            raise IllegalMoveByOpponent("no legal moves to choose from")
        if kind == "random":
            return legal[self.rng.randrange(len(legal))]
        if kind == "greedy":
            score = (
                _greedy_anti_avoider_score
                if self.role_opposed == "avoider"
                else _greedy_anti_builder_score
            )
            best = min(score(g, m) for m in legal)
            pool = [m for m in legal if score(g, m) == best]
            return pool[self.rng.randrange(len(pool))]
        if kind == "solver":
            if g.n <= default_solve_bound(g.k):
                objective = (
                    Objective.FORCE_HAMILTONIAN
                    if self.role_opposed == "builder"
                    else Objective.AVOID_TWO_CONNECTED
                )
                for m in legal:
                    res = solve(add_edge(g, m), objective=objective)
                    if not res.mover_wins:
                        return m
            return legal[self.rng.randrange(len(legal))]
        if kind == "scripted":
            if self.cursor >= len(self.spec.moves):
                raise ScriptExhausted(f"script exhausted after {self.cursor} moves")
            u, v = self.spec.moves[self.cursor]
            self.cursor += 1
            m = move(u, v)
            if not is_legal(g, m):
                raise IllegalMoveByOpponent(f"scripted move {m} is illegal")
            return m
        raise ValueError(f"unknown opponent kind {kind!r}")


def opponent_move(
    kind: str,
    g: GameGraph,
    side_role_opposed: Optional[str],
    rng_or_spec,
) -> MoveEdge:
    """One-shot opponent move (wraps the stateful opponent for callers that
    manage their own rng/spec)."""
    if isinstance(rng_or_spec, OpponentSpec):
        spec = rng_or_spec
    else:
        spec = OpponentSpec(kind=kind, seed=0)
    opp = _Opponent(replace(spec, kind=kind), side_role_opposed)
    if not isinstance(rng_or_spec, OpponentSpec):
        opp.rng = rng_or_spec
    return opp.next_move(g)


# ---------------------------------------------------------------------------
# Snapshots
# ---------------------------------------------------------------------------

class _SnapshotKeeper:
    """Per-move cap-3 bookkeeping: tracked root, freedom stats, shape labels,
    and the persistent witness."""

    def __init__(self, k: int):
        self.enabled = k == 3
        self.root: Optional[int] = None
        self.witness: Optional[WitnessReport] = None

    def observe(self, g: GameGraph) -> tuple:
        if not self.enabled:
            return None, None, (), None
        if self.root is None:
            for v in range(g.n):
                if g.adj[v]:
                    self.root = v
                    break
        if self.root is None:
            return None, None, (), None
        view = component_view(g, self.root)
        f_c = sum(3 - g.degree(v) for v in view.c_vertices)
        e_d = sum(
            sum(3 - g.degree(v) for v in bits(dm)) - 2 for dm in view.d_masks
        )
        labels = [classify_component(g, view.c_mask).label.value]
        labels.extend(
            classify_component(g, dm).label.value for dm in view.d_masks
        )
        if self.witness is None:
            w = has_witness(g)
            if w:
                self.witness = w
        else:
            assert witness_still_valid(g, self.witness), "witness decayed"
        wit = None
        if self.witness is not None:
            anchor = (
                self.witness.vertex
                if self.witness.vertex is not None
                else min(self.witness.component)
            )
            wit = (self.witness.kind, anchor)
        return f_c, e_d, tuple(labels), wit


# ---------------------------------------------------------------------------
# Running games
# ---------------------------------------------------------------------------

def run_game(cfg: GameConfig) -> GameTrace:
    """Play one full game under cfg and return its trace."""
    g = GameGraph.from_edges(cfg.n, cfg.k, cfg.initial_edges)
    strategy = None
    if cfg.role == "builder":
        strategy = BuilderPlayer()
    elif cfg.role == "avoider":
        strategy = AvoiderPlayer.for_initial(g)
    opponent = _Opponent(cfg.opponent, cfg.role)

    snap = _SnapshotKeeper(cfg.k)
    records: list[MoveRecord] = []
    strategy_is_p1 = cfg.first == "strategy"
    last_move: Optional[MoveEdge] = None
    index = 0

    while next(iter_legal_moves(g), None) is not None:
        index += 1
        p1_to_move = index % 2 == 1
        strategy_turn = strategy is not None and (p1_to_move == strategy_is_p1)
        if strategy_turn:
            decision, strategy = strategy.respond(g, last_move)
            edge, rule = decision.edge, decision.rule
        else:
            edge = opponent.next_move(g)
            rule = cfg.opponent.kind
        g = add_edge(g, edge)
        if cfg.role == "builder" and strategy_turn and not strategy.closed:
            if strategy.state is not None and g.isolated_mask():
                check_path_invariants(strategy.state, g)
        f_c, e_d, labels, wit = snap.observe(g)
        records.append(
            MoveRecord(index, 1 if p1_to_move else 2, edge, rule, f_c, e_d, labels, wit)
        )
        last_move = edge

    two_conn = is_two_connected(g)
    ham = False if not two_conn else hamilton_cycle(g) is not None
    final_wit = records[-1].witness if records else None
    terminal = {
        "edges": g.edge_count(),
        "moves": len(records),
        "hamiltonian": ham,
        "two_connected": two_conn,
        "witness": None
        if final_wit is None
        else {"kind": final_wit[0], "at": final_wit[1]},
    }
    return GameTrace(cfg, records, terminal)


def replay_trace(trace: GameTrace) -> GameGraph:
    """Re-run a trace's moves, recomputing every snapshot; raise
    ReplayMismatch (naming the move index) on any disagreement."""
    cfg = trace.config
    g = GameGraph.from_edges(cfg.n, cfg.k, cfg.initial_edges)
    snap = _SnapshotKeeper(cfg.k)
    for rec in trace.records:
        expected_player = 1 if rec.index % 2 == 1 else 2
        if rec.player != expected_player:
            raise ReplayMismatch(f"move {rec.index}: player {rec.player} out of turn")
        if not is_legal(g, rec.edge):
            raise ReplayMismatch(f"move {rec.index}: edge {rec.edge} illegal")
        g = add_edge(g, rec.edge)
        f_c, e_d, labels, wit = snap.observe(g)
        got = (f_c, e_d, tuple(labels), wit)
        want = (rec.f_c, rec.e_d, rec.labels, rec.witness)
        if got != want:
            raise ReplayMismatch(
                f"move {rec.index}: snapshot {got} != recorded {want}"
            )
    if next(iter_legal_moves(g), None) is not None:
        raise ReplayMismatch("trace ends before the game is over")
    two_conn = is_two_connected(g)
    ham = False if not two_conn else hamilton_cycle(g) is not None
    if trace.terminal.get("two_connected") != two_conn:
        raise ReplayMismatch("terminal 2-connectivity mismatch")
    if trace.terminal.get("hamiltonian") != ham:
        raise ReplayMismatch("terminal Hamiltonicity mismatch")
    if trace.terminal.get("edges") != g.edge_count():
        raise ReplayMismatch("terminal edge count mismatch")
    return g


# ---------------------------------------------------------------------------
# Monitors
# ---------------------------------------------------------------------------

@dataclass
class MonitorReport:
    name: str
    checked: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        state = "pass" if self.ok else "FAIL"
        return f"{self.name}: {state} ({self.checked} checks, {len(self.violations)} violations)"


def _avoider_player_number(cfg: GameConfig) -> int:
    return 1 if cfg.first == "strategy" else 2


def _positions(trace: GameTrace) -> list[GameGraph]:
    """Graphs after 0..M moves."""
    cfg = trace.config
    g = GameGraph.from_edges(cfg.n, cfg.k, cfg.initial_edges)
    out = [g]
    for rec in trace.records:
        g = add_edge(g, rec.edge)
        out.append(g)
    return out


def _root_of(trace: GameTrace) -> Optional[int]:
    cfg = trace.config
    g0 = GameGraph.from_edges(cfg.n, cfg.k, cfg.initial_edges)
    for v in range(cfg.n):
        if g0.adj[v]:
            return v
    if trace.records:
        return min(trace.records[0].edge)
    return None


def monitor_lemma3(trace: GameTrace) -> MonitorReport:
    """Across each avoider move drawn inside the tracked component, the total
    F(C) + E(D) from the position before it to the position after the
    opponent's reply must not increase, with equality exactly when the reply
    joined two isolated vertices."""
    report = MonitorReport("potential-non-increase")
    cfg = trace.config
    if cfg.role != "avoider" or cfg.k != 3:
        return report
    avoider = _avoider_player_number(cfg)
    root = _root_of(trace)
    if root is None:
        return report
    graphs = _positions(trace)

    def stats(g: GameGraph) -> int:
        view = component_view(g, root)
        f_c = sum(3 - g.degree(v) for v in view.c_vertices)
        e_d = sum(
            sum(3 - g.degree(v) for v in bits(dm)) - 2 for dm in view.d_masks
        )
        return f_c + e_d

    for i, rec in enumerate(trace.records, start=1):
        if rec.player != avoider or i + 1 > len(trace.records):
            continue
        before = graphs[i - 1]
        c_mask = gc.reach_mask(before.adj, root, before.full_mask())
        if not (c_mask >> rec.edge.u & 1 and c_mask >> rec.edge.v & 1):
            continue
        report.checked += 1
        reply = trace.records[i]  # move i+1, 0-based index i
        s_before = stats(before)
        s_after = stats(graphs[i + 1])
        # Isolated-before endpoints: after the reply each one's only
        # neighbor is the other endpoint.
        iso_iso = (
            graphs[i + 1].adj[reply.edge.u] == 1 << reply.edge.v
            and graphs[i + 1].adj[reply.edge.v] == 1 << reply.edge.u
        )
        if s_after > s_before:
            report.violations.append(
                f"move {i}: F+E rose {s_before} -> {s_after}"
            )
        elif s_after == s_before and not iso_iso:
            report.violations.append(
                f"move {i}: F+E equality without an isolated-isolated reply"
            )
        elif s_after < s_before and iso_iso:
            report.violations.append(
                f"move {i}: isolated-isolated reply without F+E equality"
            )
    return report


def _c_is_adjacent_pair_shape(g: GameGraph, c_mask: int) -> bool:
    deg2 = []
    for v in bits(c_mask):
        d = g.degree(v)
        if d == 2:
            deg2.append(v)
        elif d != 3:
            return False
    return len(deg2) == 2 and g.adjacent(deg2[0], deg2[1])


def _any_saturated_component(g: GameGraph) -> bool:
    t_mask = 0
    for v in range(g.n):
        if g.degree(v) == 3:
            t_mask |= 1 << v
    for comp in gc.component_masks(g, t_mask) if t_mask else []:
        boundary = 0
        for v in bits(comp):
            boundary |= g.adj[v]
        if boundary & ~comp == 0:
            return True
    return False


def monitor_lemma2_claim1(trace: GameTrace) -> MonitorReport:
    """Two checks over an avoider trace: (i) along occurrences of C being the
    adjacent-pair shape without an eventual cut vertex, the outside effective
    freedom strictly drops within two occurrences that are more than one move
    apart; (ii) some position shows the terminal trichotomy (adjacent-pair C
    with zero outside freedom, or a saturated component, or an eventual cut
    vertex) when the board is at least the configured threshold."""
    report = MonitorReport("descent-and-arrival")
    cfg = trace.config
    if cfg.role != "avoider" or cfg.k != 3:
        return report
    root = _root_of(trace)
    if root is None:
        return report
    graphs = _positions(trace)

    occurrences: list[tuple[int, int]] = []   # (move index, E(D))
    trichotomy_at = None
    witness_seen = False
    for t, g in enumerate(graphs):
        view = component_view(g, root)
        e_d = sum(
            sum(3 - g.degree(v) for v in bits(dm)) - 2 for dm in view.d_masks
        )
        pair_shape = _c_is_adjacent_pair_shape(g, view.c_mask)
        ecv_somewhere = find_eventual_cut_vertex(g) is not None
        if trichotomy_at is None and (
            (pair_shape and e_d == 0) or ecv_somewhere or _any_saturated_component(g)
        ):
            trichotomy_at = t
        if not witness_seen and has_witness(g):
            witness_seen = True
        if witness_seen:
            continue
        if pair_shape and find_eventual_cut_vertex(g, view.c_mask) is None:
            occurrences.append((t, e_d))

    report.checked += len(occurrences)
    for a in range(len(occurrences)):
        t_a, y = occurrences[a]
        nxt = [(t, e) for t, e in occurrences[a + 1:] if t > t_a + 1]
        if not nxt:
            continue
        t_b, e_b = nxt[0]
        if e_b < y:
            continue
        if e_b > y:
            report.violations.append(
                f"occurrence at move {t_a}: E(D) rose {y} -> {e_b} at move {t_b}"
            )
            continue
        later = [(t, e) for t, e in nxt[1:] if t > t_b + 1]
        if later and later[0][1] >= y:
            report.violations.append(
                f"occurrence at move {t_a}: E(D) stuck at {y} through move {later[0][0]}"
            )

    report.checked += 1
    if cfg.n >= cfg.n0_threshold and trichotomy_at is None:
        report.violations.append("no terminal-feature position in the whole trace")
    return report


MAIN_TABLE_RULES = {"small", "row-a", "row-b", "row-c", "row-d", "row-d-gap", "row-e"}


def monitor_subclaim3(trace: GameTrace) -> MonitorReport:
    """After any of the avoider's main-table moves, the tracked component
    must not be saturated-except-one-degree-1-and-one-degree-2-non-adjacent
    (the shape whose successor analysis breaks).  The scripted endgame lines
    build their own shapes on purpose and are exempt."""
    report = MonitorReport("no-stub-pair-shape")
    cfg = trace.config
    if cfg.role != "avoider" or cfg.k != 3:
        return report
    avoider = _avoider_player_number(cfg)
    root = _root_of(trace)
    if root is None:
        return report
    graphs = _positions(trace)
    for i, rec in enumerate(trace.records, start=1):
        if rec.player != avoider or rec.rule not in MAIN_TABLE_RULES:
            continue
        report.checked += 1
        g = graphs[i]
        c_mask = gc.reach_mask(g.adj, root, g.full_mask())
        label = classify_component(g, c_mask)
        if label.label == GraphShape.TYPE_Y:
            report.violations.append(
                f"move {i} ({rec.rule}) left the tracked component in the stub-pair shape"
            )
    return report


def run_monitors(trace: GameTrace) -> list[MonitorReport]:
    return [
        monitor_lemma3(trace),
        monitor_lemma2_claim1(trace),
        monitor_subclaim3(trace),
    ]
