"""Engine, strategies, and verification harness for the degree-capped
graph-building game: two players alternately draw edges on a fixed vertex
pool, no vertex may exceed degree k, and play ends when no edge can be added.
With cap 3 the avoider forces a final graph that is not 2-connected; with cap
4 or more the builder forces a Hamilton cycle."""

from .graph_core import (
    GameGraph,
    MoveEdge,
    StrategyDecision,
    add_edge,
    component_view,
    freedom,
    has_witness,
    is_eventual_cut_vertex,
    legal_moves,
    move,
)
from .classify import (
    AvoiderRow,
    GraphShape,
    TypeLabel,
    classify_avoider_state,
    classify_component,
    classify_graph_typeA,
)
from .oracle import (
    Objective,
    canonical_form,
    exhaust_adversary,
    hamilton_cycle,
    is_two_connected,
    solve,
)
from .builder_strategy import BuilderPlayer, builder_close, builder_open, builder_respond
from .avoider_strategy import (
    AvoiderPlan,
    AvoiderPlayer,
    avoider_respond,
    pair_four_degree2,
)
from .engine import GameConfig, GameTrace, OpponentSpec, run_game, run_monitors

__all__ = [
    "AvoiderPlan",
    "AvoiderPlayer",
    "AvoiderRow",
    "BuilderPlayer",
    "GameConfig",
    "GameGraph",
    "GameTrace",
    "GraphShape",
    "MoveEdge",
    "Objective",
    "OpponentSpec",
    "StrategyDecision",
    "TypeLabel",
    "add_edge",
    "avoider_respond",
    "builder_close",
    "builder_open",
    "builder_respond",
    "canonical_form",
    "classify_avoider_state",
    "classify_component",
    "classify_graph_typeA",
    "component_view",
    "exhaust_adversary",
    "freedom",
    "has_witness",
    "hamilton_cycle",
    "is_eventual_cut_vertex",
    "is_two_connected",
    "legal_moves",
    "move",
    "pair_four_degree2",
    "run_game",
    "run_monitors",
    "solve",
]
