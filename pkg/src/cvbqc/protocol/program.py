"""Program files: a JSON description of the resource strategy and the per-node angles.

Layouts::

    {"strategy": "brickwork", "n_wires": 2, "n_layers": 1,
     "bricks": [{"index": 0, "kind": "sq", "v": [0.3, 0.2, 0.1]}], "inputs": "vacuum"}
    {"strategy": "graph" | "hair", "graph": <ModeGraph dict>, "phi": {"0": [a, b, c]}, "carve": [..]}
    {"strategy": "hidden", "logical": <ModeGraph dict>, "host": <ModeGraph dict>,
     "phi": {...}, "s": {"1": 0.4}}

``inputs`` is ``"resource"`` (default: inputs are resource qumodes) or
``"vacuum"``.  Every malformed entry raises :class:`ConfigError` naming it.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ..algebra.params import ParamVector
from ..backends import FockState, GaussianState
from ..exceptions import ConfigError, NoEmbedding
from ..graphs import BrickworkLayout, ModeGraph, brick_pattern, hide_graph
from ..graphs.brickwork import KINDS
from .config import ExperimentConfig
from .plans import ProtocolPlan, brickwork_plan, graph_plan, hair_strategy_plan, hidden_plan

STRATEGIES = ("brickwork", "graph", "hair", "hidden")


def _vector(value, where: str, config: ExperimentConfig) -> ParamVector:
    if not isinstance(value, (list, tuple)) or not 1 <= len(value) <= 3:
        raise ConfigError(where, "expected an array of 1 to 3 numbers")
    if not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in value):
        raise ConfigError(where, "entries must be numbers")
    v = ParamVector(*(float(x) for x in value))
    if v.c != 0 and config.backend == "gaussian":
        raise ConfigError(where, "cubic terms need the fock backend")
    return v


def _int(value, where: str, lo: int = 0) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or value < lo:
        raise ConfigError(where, f"expected an integer >= {lo}, got {value!r}")
    return value


def _graph(value, where: str) -> ModeGraph:
    if not isinstance(value, dict) or "nodes" not in value:
        raise ConfigError(where, "expected a graph object with a 'nodes' list")
    try:
        return ModeGraph.from_dict(value)
    except (TypeError, ValueError, KeyError) as exc:
        raise ConfigError(where, str(exc)) from None


def _phi(value, where: str, nodes, config: ExperimentConfig) -> dict:
    if value is None:
        return {}
    if not isinstance(value, dict):
        raise ConfigError(where, "expected an object mapping node ids to arrays")
    out = {}
    for k, v in value.items():
        try:
            n = int(k)
        except ValueError:
            raise ConfigError(f"{where}.{k}", "node ids must be integers") from None
        if n not in nodes:
            raise ConfigError(f"{where}.{k}", "no such node")
        out[n] = _vector(v, f"{where}.{k}", config)
    return out


def _inputs(kind, graph: ModeGraph, config: ExperimentConfig) -> dict:
    if kind in (None, "resource"):
        return {}
    if kind != "vacuum":
        raise ConfigError("inputs", f"expected 'resource' or 'vacuum', got {kind!r}")
    if config.backend == "gaussian":
        return {n: GaussianState.vacuum(1) for n in graph.inputs}
    return {n: FockState.vacuum((config.cutoff,), config.budget) for n in graph.inputs}


def plan_from_dict(d: dict, config: ExperimentConfig) -> ProtocolPlan:
    if not isinstance(d, dict):
        raise ConfigError("<root>", "program must be a JSON object")
    strategy = d.get("strategy", config.strategy)
    if strategy not in STRATEGIES:
        raise ConfigError("strategy", f"must be one of {STRATEGIES}, got {strategy!r}")

    if strategy == "brickwork":
        layout = BrickworkLayout(_int(d.get("n_wires", 2), "n_wires", 1), 4 * _int(d.get("n_layers", 1), "n_layers", 1))
        bricks = d.get("bricks", [])
        if not isinstance(bricks, list):
            raise ConfigError("bricks", "expected an array")
        for i, b in enumerate(bricks):
            where = f"bricks[{i}]"
            if not isinstance(b, dict):
                raise ConfigError(where, "expected an object")
            idx = _int(b.get("index", i), f"{where}.index")
            if idx >= len(layout.bricks()):
                raise ConfigError(f"{where}.index", f"layout has {len(layout.bricks())} bricks")
            kind = b.get("kind")
            if kind not in KINDS:
                raise ConfigError(f"{where}.kind", f"must be one of {KINDS}, got {kind!r}")
            v = _vector(b.get("v", [0.0]), f"{where}.v", config)
            layout.assign(idx, brick_pattern(kind, v))
        graph = layout.graph()
        return brickwork_plan(layout, input_states=_inputs(d.get("inputs"), graph, config))

    if strategy in ("graph", "hair"):
        graph = _graph(d.get("graph"), "graph")
        phi = _phi(d.get("phi"), "phi", set(graph.nodes), config)
        inputs = _inputs(d.get("inputs"), graph, config)
        if strategy == "graph":
            return graph_plan(graph, phi, input_states=inputs)
        carve = d.get("carve", [])
        if not isinstance(carve, list) or any(c not in graph.nodes for c in carve):
            raise ConfigError("carve", "expected an array of node ids of the graph")
        inputs = {n: s for n, s in inputs.items() if n not in carve}
        return hair_strategy_plan(graph, phi, carve=carve, input_states=inputs)

    logical = _graph(d.get("logical"), "logical")
    host = _graph(d.get("host"), "host")
    s = d.get("s")
    s_values = None
    if s is not None:
        if not isinstance(s, dict):
            raise ConfigError("s", "expected an object mapping disconnector ids to numbers")
        try:
            s_values = {int(k): float(v) for k, v in s.items()}
        except (TypeError, ValueError):
            raise ConfigError("s", "keys must be node ids and values numbers") from None
    try:
        spec = hide_graph(logical, host, rng=np.random.default_rng(config.seed), s_values=s_values)
    except (NoEmbedding, ValueError) as exc:
        raise ConfigError("host", str(exc)) from None
    phi = _phi(d.get("phi"), "phi", set(logical.nodes), config)
    return hidden_plan(spec, phi, input_states=_inputs(d.get("inputs"), logical, config))


def load_program(path, config: ExperimentConfig) -> ProtocolPlan:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"line {exc.lineno}", f"invalid JSON: {exc.msg}") from None
    except OSError as exc:
        raise ConfigError("program", str(exc)) from None
    return plan_from_dict(data, config)


__all__ = ["STRATEGIES", "load_program", "plan_from_dict"]
