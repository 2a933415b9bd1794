"""Resource graphs: signed CZ graph states, brickwork, hair, hiding, scheduling."""

from .brickwork import BrickPattern, BrickworkLayout, brick_pattern, single_brick_layout
from .builder import build_graph_state
from .hair import HairGadget, carve_fidelity, hair_plan, implant_hairs
from .hiding import HiddenGraphSpec, disconnector_mutual_information, disconnector_state, hide_graph, hiding_report
from .modegraph import ModeGraph, path_graph
from .roles import Role, default_roles
from .schedule import audit_schedule, execute_plan, replay_check, temporal_schedule

__all__ = [
    "BrickPattern",
    "BrickworkLayout",
    "HairGadget",
    "HiddenGraphSpec",
    "ModeGraph",
    "Role",
    "audit_schedule",
    "brick_pattern",
    "build_graph_state",
    "carve_fidelity",
    "default_roles",
    "disconnector_mutual_information",
    "disconnector_state",
    "execute_plan",
    "hair_plan",
    "hide_graph",
    "hiding_report",
    "implant_hairs",
    "path_graph",
    "replay_check",
    "single_brick_layout",
    "temporal_schedule",
]
