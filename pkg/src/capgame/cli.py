"""Command-line surface: simulate, exhaust, solve, play, classify, check-trace.

Exit codes are a contract: 0 success, 1 objective or verification failure,
2 usage error.  DEGREE_GAME_SEED provides the default seed.
"""

from __future__ import annotations

import argparse
import json
import multiprocessing
import os
import sys
from typing import Optional

from . import engine as eng
from .avoider_strategy import AvoiderPlayer, StrategyBreak
from .builder_strategy import BuilderPlayer
from .classify import classify_component, classify_graph_typeA
from .graph_core import (
    GameGraph,
    GraphError,
    add_edge,
    bits,
    component_view,
    has_witness,
    is_legal,
    iter_legal_moves,
    load_graph,
    move,
)
from .oracle import (
    Objective,
    TooLarge,
    exhaust_adversary,
    hamilton_cycle,
    is_two_connected,
    solve,
)


def _default_seed() -> int:
    try:
        return int(os.environ.get("DEGREE_GAME_SEED", "0"))
    except ValueError:
        return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="capgame",
        description="Degree-capped graph game: strategies, oracles, verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run strategy-vs-opponent games")
    sim.add_argument("--k", type=int, required=True)
    sim.add_argument("--n", type=int, required=True)
    sim.add_argument("--role", choices=["builder", "avoider"], required=True)
    sim.add_argument("--first", choices=["strategy", "opponent"], default="strategy")
    sim.add_argument(
        "--opponent", choices=["random", "greedy", "solver"], default="random"
    )
    sim.add_argument("--seed", type=int, default=None)
    sim.add_argument("--games", type=int, default=1)
    sim.add_argument("--trace", type=str, default=None)
    sim.add_argument("--n0", type=int, default=24)
    sim.add_argument("--jobs", type=int, default=1)
    sim.add_argument("--quiet", action="store_true")

    exh = sub.add_parser("exhaust", help="play a strategy against every line")
    exh.add_argument("--k", type=int, required=True)
    exh.add_argument("--n", type=int, required=True)
    exh.add_argument("--role", choices=["builder", "avoider"], required=True)
    exh.add_argument("--first", choices=["strategy", "opponent"], default="strategy")
    exh.add_argument("--max-nodes", type=int, default=None)
    exh.add_argument("--n0", type=int, default=24)

    sol = sub.add_parser("solve", help="exact value of a small instance")
    sol.add_argument("--k", type=int, required=True)
    sol.add_argument("--n", type=int, required=True)
    sol.add_argument("--side", type=int, choices=[1, 2], default=1)
    sol.add_argument(
        "--objective",
        choices=[o.value for o in Objective],
        default=Objective.FORCE_HAMILTONIAN.value,
    )
    sol.add_argument("--graph", type=str, default=None, help="graph file to start from")

    ply = sub.add_parser("play", help="interactive game against the engine")
    ply.add_argument("--k", type=int, required=True)
    ply.add_argument("--n", type=int, required=True)
    ply.add_argument("--human", choices=["builder", "avoider"], required=True)
    ply.add_argument("--first", choices=["human", "engine"], default="human")
    ply.add_argument("--quiet", action="store_true")

    cls = sub.add_parser("classify", help="label the components of a graph file")
    cls.add_argument("path", type=str)

    chk = sub.add_parser("check-trace", help="replay and re-verify a trace file")
    chk.add_argument("--trace", type=str, required=True)
    return parser


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------

def _one_game(cfg: eng.GameConfig) -> eng.GameTrace:
    return eng.run_game(cfg)


def _cmd_simulate(args) -> int:
    if args.role == "builder" and args.k < 4:
        print(
            "usage error: the builder strategy needs k >= 4; at k = 3 the "
            "opponent can always force a graph that is not 2-connected",
            file=sys.stderr,
        )
        return 2
    if args.role == "avoider" and args.k != 3:
        print(
            "usage error: the avoider strategy is specific to k = 3; for "
            "k >= 4 either player can force a Hamiltonian final graph",
            file=sys.stderr,
        )
        return 2
    base_seed = args.seed if args.seed is not None else _default_seed()
    configs = [
        eng.GameConfig(
            n=args.n,
            k=args.k,
            role=args.role,
            first=args.first,
            opponent=eng.OpponentSpec(kind=args.opponent, seed=base_seed + i),
            n0_threshold=args.n0,
            game_id=i,
        )
        for i in range(args.games)
    ]
    try:
        if args.jobs > 1:
            with multiprocessing.Pool(args.jobs) as pool:
                traces = pool.map(_one_game, configs)
        else:
            traces = [eng.run_game(c) for c in configs]
    except StrategyBreak as exc:
        print(f"strategy break: {exc}", file=sys.stderr)
        return 1

    successes = 0
    monitor_failures = 0
    for t in traces:
        goal_met = (
            t.terminal["hamiltonian"]
            if args.role == "builder"
            else not t.terminal["two_connected"]
        )
        if goal_met:
            successes += 1
        if args.role == "avoider":
            for rep in eng.run_monitors(t):
                if not rep.ok:
                    monitor_failures += 1
                    if not args.quiet:
                        print(f"game {t.config.game_id}: {rep.summary()}")
    if args.trace:
        eng.write_traces(args.trace, traces)
    goal_name = "hamiltonian" if args.role == "builder" else "not 2-connected"
    print(
        f"{goal_name}: {successes}/{len(traces)}"
        f"  monitor failures: {monitor_failures}"
    )
    return 0 if successes == len(traces) and monitor_failures == 0 else 1


# ---------------------------------------------------------------------------
# exhaust
# ---------------------------------------------------------------------------

def _cmd_exhaust(args) -> int:
    g0 = GameGraph.empty(args.n, args.k)
    player = BuilderPlayer() if args.role == "builder" else AvoiderPlayer.for_initial(g0)
    try:
        report = exhaust_adversary(
            player,
            args.role,
            g0,
            first=args.first,
            max_nodes=args.max_nodes,
        )
    except TooLarge as exc:
        print(f"too large: {exc}", file=sys.stderr)
        return 2
    print(report.summary())
    lines_ok = report.terminals - len(report.failures) + report.early_stops
    print(
        f"lines checked: {report.terminals + report.early_stops} "
        f"(ok {lines_ok}), distinct terminal classes: {len(report.terminal_classes)}"
    )
    if report.all_ok:
        print("universal success")
        return 0
    if args.role == "avoider" and args.n < args.n0:
        print(
            f"universal failure or gaps at n={args.n}: below the threshold "
            f"n0={args.n0} the guarantee is not claimed"
        )
    for fault in report.strategy_faults[:3]:
        print(f"strategy fault after {list(fault.line)}: {fault.error}")
    if report.failures:
        print(f"first failing line: {list(report.failures[0])}")
    return 1


# ---------------------------------------------------------------------------
# solve
# ---------------------------------------------------------------------------

def _cmd_solve(args) -> int:
    if args.graph:
        with open(args.graph) as fh:
            g = load_graph(fh.read())
    else:
        g = GameGraph.empty(args.n, args.k)
    try:
        res = solve(g, side=args.side, objective=Objective(args.objective))
    except TooLarge as exc:
        print(f"too large: {exc}", file=sys.stderr)
        return 2
    out = {
        "k": g.k,
        "n": g.n,
        "side": args.side,
        "objective": res.objective.value,
        "mover_wins": res.mover_wins,
        "principal_move": None
        if res.principal_move is None
        else [res.principal_move.u, res.principal_move.v],
        "nodes": res.nodes_expanded,
    }
    print(json.dumps(out, sort_keys=True))
    return 0


# ---------------------------------------------------------------------------
# play
# ---------------------------------------------------------------------------

def _print_position(g: GameGraph, root: Optional[int], quiet: bool) -> None:
    print(f"edges: {[tuple(e) for e in g.edges()]}")
    print(f"degrees: {g.degrees()}")
    if g.k == 3 and root is not None and not quiet:
        view = component_view(g, root)
        f_c = sum(3 - g.degree(v) for v in view.c_vertices)
        e_d = sum(
            sum(3 - g.degree(v) for v in bits(dm)) - 2 for dm in view.d_masks
        )
        labels = [classify_component(g, view.c_mask).label.value] + [
            classify_component(g, dm).label.value for dm in view.d_masks
        ]
        print(f"tracked component: {sorted(view.c_vertices)}  F(C)={f_c}  E(D)={e_d}")
        print(f"component labels: {labels}")


def _read_human_move(g: GameGraph) -> Optional[object]:
    while True:
        try:
            raw = input("your move (u v): ").strip()
        except EOFError:
            return None
        parts = raw.split()
        if len(parts) != 2:
            print("illegal: enter two vertex numbers")
            continue
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            print("illegal: enter two vertex numbers")
            continue
        if u == v:
            print("illegal: self-loop")
            continue
        if not (0 <= u < g.n and 0 <= v < g.n):
            print(f"illegal: vertices must be in 0..{g.n - 1}")
            continue
        m = move(u, v)
        if g.adjacent(u, v):
            print("illegal: edge already present")
            continue
        if g.degree(u) >= g.k or g.degree(v) >= g.k:
            print("illegal: degree cap")
            continue
        return m


def _cmd_play(args) -> int:
    engine_role = "avoider" if args.k == 3 else "builder"
    if args.human == engine_role:
        print(
            f"usage error: at k={args.k} the engine plays the {engine_role}; "
            f"choose --human {'builder' if engine_role == 'avoider' else 'avoider'}",
            file=sys.stderr,
        )
        return 2
    g = GameGraph.empty(args.n, args.k)
    strategy = BuilderPlayer() if engine_role == "builder" else AvoiderPlayer.for_initial(g)
    human_to_move = args.first == "human"
    last_move = None
    root = None
    witness_announced = False
    print(f"playing on {args.n} vertices with degree cap {args.k}; "
          f"you are the {args.human}, the engine is the {engine_role}")
    while next(iter_legal_moves(g), None) is not None:
        _print_position(g, root, args.quiet)
        if human_to_move:
            m = _read_human_move(g)
            if m is None:
                print("bye")
                return 0
        else:
            decision, strategy = strategy.respond(g, last_move)
            m = decision.edge
            tag = "" if args.quiet else f"  [{decision.rule}]"
            print(f"engine plays {m.u} {m.v}{tag}")
        g = add_edge(g, m)
        last_move = m
        if root is None:
            root = min(m)
        if g.k == 3 and not witness_announced:
            w = has_witness(g)
            if w:
                anchor = w.vertex if w.vertex is not None else min(w.component)
                print(f"witness: {w.kind} at {anchor} -- no completion is Hamiltonian")
                witness_announced = True
        human_to_move = not human_to_move
    two_conn = is_two_connected(g)
    ham = False if not two_conn else hamilton_cycle(g) is not None
    print(f"game over: hamiltonian={ham}  not 2-connected: {not two_conn}")
    if g.k == 3:
        w = has_witness(g)
        if w:
            anchor = w.vertex if w.vertex is not None else min(w.component)
            print(f"final witness: {w.kind} at {anchor}")
    return 0


# ---------------------------------------------------------------------------
# classify
# ---------------------------------------------------------------------------

def _cmd_classify(args) -> int:
    try:
        with open(args.path) as fh:
            g = load_graph(fh.read())
    except (OSError, GraphError, ValueError) as exc:
        print(f"cannot read graph: {exc}", file=sys.stderr)
        return 2
    from .graph_core import component_masks

    nonisolated = g.full_mask() & ~g.isolated_mask()
    for cmask in component_masks(g, nonisolated):
        label = classify_component(g, cmask)
        print(json.dumps(label.to_dict(), sort_keys=True))
    evidence = classify_graph_typeA(g)
    if evidence:
        print(
            json.dumps(
                {
                    "label": "type_A",
                    "evidence": list(evidence.single_edge)
                    + [v for pq in evidence.pairs for v in pq],
                },
                sort_keys=True,
            )
        )
    return 0


# ---------------------------------------------------------------------------
# check-trace
# ---------------------------------------------------------------------------

def _cmd_check_trace(args) -> int:
    try:
        with open(args.trace) as fh:
            text = fh.read()
    except OSError as exc:
        print(f"cannot read trace: {exc}", file=sys.stderr)
        return 2
    try:
        traces = eng.parse_traces(text)
    except eng.ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 1
    bad = 0
    for t in traces:
        try:
            eng.replay_trace(t)
        except eng.ReplayMismatch as exc:
            print(f"game {t.config.game_id}: replay mismatch: {exc}")
            bad += 1
            continue
        for rep in eng.run_monitors(t):
            print(f"game {t.config.game_id}: {rep.summary()}")
            if not rep.ok:
                bad += 1
    print(f"{len(traces)} trace(s), {bad} failure(s)")
    return 0 if bad == 0 else 1


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    handlers = {
        "simulate": _cmd_simulate,
        "exhaust": _cmd_exhaust,
        "solve": _cmd_solve,
        "play": _cmd_play,
        "classify": _cmd_classify,
        "check-trace": _cmd_check_trace,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
