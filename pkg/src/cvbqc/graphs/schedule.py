"""Temporal scheduling: one CZ machine, nodes prepared just in time.

A plan is a list of tagged operations::

    {"op": "prepare", "node": n}
    {"op": "cz", "nodes": [i, j], "sign": s}
    {"op": "measure", "node": n, "output": bool}

Every step holds exactly one operation, so at most one CZ is ever in flight.
Nodes are prepared only when a measurement needs them and edges are applied
only when one endpoint is about to be measured, which keeps the number of
simultaneously live modes small (three for a brickwork brick).
"""

from __future__ import annotations

import numpy as np

from ..algebra.params import ObservablePoly, ParamVector
from ..algebra.words import ControlledZ, GateWord
from ..backends import fidelity
from ..backends.fock import FockState
from ..exceptions import CapacityError, CycleError
from .builder import build_graph_state
from .modegraph import ModeGraph, _key


def temporal_schedule(graph: ModeGraph, order=None) -> list:
    order = list(graph.order if order is None else order)
    graph.check_order() if order == graph.order else _check(graph, order)
    plan, prepared, applied, measured = [], set(), set(), set()

    def prepare(n):
        if n not in prepared:
            plan.append({"op": "prepare", "node": n})
            prepared.add(n)

    def entangle(k):
        for l, s in sorted(graph.neighbors(k).items()):
            e = _key(k, l)
            if e not in applied:
                prepare(l)
                plan.append({"op": "cz", "nodes": list(e), "sign": s})
                applied.add(e)

    for k in order:
        prepare(k)
        entangle(k)
        plan.append({"op": "measure", "node": k, "output": False})
        measured.add(k)
    for n in graph.outputs:
        prepare(n)
    for n in graph.outputs:
        entangle(n)
    for n in graph.outputs:
        plan.append({"op": "measure", "node": n, "output": True})
    return plan


def _check(graph: ModeGraph, order) -> None:
    pos = {n: i for i, n in enumerate(order)}
    for n, deps in graph.dependencies().items():
        for d in deps:
            if n in pos and d in pos and pos[d] > pos[n]:
                raise CycleError(f"node {n} is measured before node {d}, whose outcome it needs")


def audit_schedule(graph: ModeGraph, plan: list) -> dict:
    """Check a plan against the graph; returns a report with ``ok`` and the violations found."""
    problems = []
    prepared, measured, applied = set(), set(), set()
    live, max_live, n_cz = set(), 0, 0
    meas_order = []
    for step, op in enumerate(plan):
        kind = op["op"]
        if kind == "prepare":
            n = op["node"]
            if n in prepared:
                problems.append(f"step {step}: node {n} prepared twice")
            prepared.add(n)
            live.add(n)
        elif kind == "cz":
            n_cz += 1
            i, j = op["nodes"]
            e = _key(i, j)
            if e not in graph.edges:
                problems.append(f"step {step}: CZ on non-edge {e}")
            elif graph.edges[e] != op["sign"]:
                problems.append(f"step {step}: wrong sign on edge {e}")
            if e in applied:
                problems.append(f"step {step}: edge {e} applied twice")
            for n in (i, j):
                if n not in live:
                    problems.append(f"step {step}: CZ touches node {n} which is not live")
            applied.add(e)
        elif kind == "measure":
            n = op["node"]
            if n not in live:
                problems.append(f"step {step}: measuring node {n} which is not live")
            missing = [l for l in graph.neighbors(n) if _key(n, l) not in applied]
            if missing:
                problems.append(f"step {step}: node {n} measured before its edges to {missing}")
            live.discard(n)
            measured.add(n)
            if not op.get("output"):
                meas_order.append(n)
        else:
            problems.append(f"step {step}: unknown op {kind!r}")
        max_live = max(max_live, len(live))
    if applied != set(graph.edges):
        problems.append(f"edges never applied: {sorted(set(graph.edges) - applied)}")
    if set(prepared) != set(graph.nodes):
        problems.append("not every node was prepared")
    try:
        _check(graph, meas_order)
    except CycleError as exc:
        problems.append(str(exc))
    return {
        "ok": not problems,
        "problems": problems,
        "steps": len(plan),
        "cz_steps": n_cz,
        "max_cz_per_step": 1 if n_cz else 0,
        "max_live_modes": max_live,
    }


def execute_plan(plan: list, prepare_fn, measure_fn, max_modes: int | None = None, readout: bool = False):
    """Replay a plan on a streamed simulator.

    ``prepare_fn(node)`` returns a single-mode state; ``measure_fn(node,
    state, mode_index)`` returns the post-measurement state with that mode
    removed (or ``None`` if nothing is left).  Output readouts are skipped
    unless ``readout`` is set.  Returns ``(state, live_nodes, max_live)``.
    """
    state, live, max_live = None, [], 0
    for op in plan:
        kind = op["op"]
        if kind == "prepare":
            s = prepare_fn(op["node"])
            state = s if state is None else state.tensor(s)
            live.append(op["node"])
            max_live = max(max_live, len(live))
            if max_modes is not None and len(live) > max_modes:
                raise CapacityError(f"plan needs {len(live)} live modes, limit is {max_modes}")
        elif kind == "cz":
            i, j = (live.index(n) for n in op["nodes"])
            state = state.apply_word(GateWord(len(live), (ControlledZ(i, j, op["sign"]),)))
        elif kind == "measure":
            if op.get("output") and not readout:
                continue
            k = live.index(op["node"])
            state = measure_fn(op["node"], state, k)
            live.pop(k)
    return state, live, max_live


def replay_check(graph: ModeGraph, omega: float = 0.8, cutoff: int = 18, seed: int = 0) -> dict:
    """Streamed execution of the temporal schedule vs building the whole graph state first.

    Random quadratic measurement parameters and outcomes (seeded) are applied
    identically on both paths; returns the fidelity of the remaining output
    states together with the schedule audit.
    """
    rng = np.random.default_rng(seed)
    params = {n: ParamVector(*rng.uniform(-0.5, 0.5, 2), 0.0) for n in graph.order}
    outcomes = {n: float(rng.normal(scale=0.5)) for n in graph.order}

    def measure(node, state, k):
        post, _ = state.project(k, outcomes[node], ObservablePoly(params[node]))
        return post

    plan = temporal_schedule(graph)
    streamed, live, max_live = execute_plan(plan, lambda n: FockState.squeezed_vacuum(omega, cutoff), measure)
    batch = build_graph_state(graph, "fock", omega, cutoff)
    live_b = list(graph.nodes)
    for n in graph.order:
        k = live_b.index(n)
        batch = measure(n, batch, k)
        live_b.pop(k)
    if live != live_b:
        raise AssertionError(f"streamed outputs {live} differ from batch outputs {live_b}")
    return {"fidelity": fidelity(streamed, batch), "max_live_modes": max_live, "audit": audit_schedule(graph, plan)}

