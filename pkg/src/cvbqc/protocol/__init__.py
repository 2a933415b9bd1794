"""The blind two-party protocol: messages, parties, runner and experiments."""

from .config import ExperimentConfig
from .experiments import (
    blindness_experiment,
    correctness_experiment,
    direct_output,
    finite_squeezing_experiment,
    received_mixture,
    sample_deltas,
)
from .frames import DeltaComputation, FrameTracker, compute_delta, nonblind_params, reconstruct_theta
from .messages import Channel, Delta, Outcome, QumodeTransfer, Transcript
from .parties import Alice, AliceSecret, Bob, HonestBob, QumodeStore
from .program import load_program, plan_from_dict
from .plans import ProtocolPlan, brickwork_plan, graph_plan, hair_strategy_plan, hidden_plan, logical_word
from .run import ProtocolResult, run_protocol, run_twin

__all__ = [
    "Alice",
    "AliceSecret",
    "Bob",
    "Channel",
    "Delta",
    "DeltaComputation",
    "ExperimentConfig",
    "FrameTracker",
    "HonestBob",
    "Outcome",
    "ProtocolPlan",
    "ProtocolResult",
    "QumodeStore",
    "QumodeTransfer",
    "Transcript",
    "blindness_experiment",
    "brickwork_plan",
    "compute_delta",
    "correctness_experiment",
    "direct_output",
    "finite_squeezing_experiment",
    "graph_plan",
    "hair_strategy_plan",
    "hidden_plan",
    "load_program",
    "logical_word",
    "nonblind_params",
    "plan_from_dict",
    "received_mixture",
    "reconstruct_theta",
    "run_protocol",
    "run_twin",
    "sample_deltas",
]
