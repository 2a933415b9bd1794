"""Hair implantation: a 4-qumode path on every node.

A hair lets the client remove any node using only p-type measurements:

* carve ``v`` (simulate a q measurement of ``v``): teleport ``v`` down its
  hair with slot parameters ``0, q^2/2, q^2/2, 0`` (the word
  ``F . F e^{iq^2/2} . F e^{iq^2/2} . F`` turns ``p`` into ``q``) and read
  ``p`` on the tip; the outcome ``s`` kicks ``Z(sign * s)`` onto the former
  neighbours of ``v``.
* keep ``v`` (remove the hair): ``p`` on the tip is a ``q`` measurement of
  ``h3``, after which ``h2`` is a leaf whose ``p`` measurement projects
  ``h1``; ``h3`` and ``h1`` are then discarded.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..algebra.params import ObservablePoly, ParamVector
from ..algebra.words import Fourier, GateWord
from .builder import build_graph_state
from .modegraph import ModeGraph, _key
from .roles import Role, default_roles, leaf_role

HAIR_LENGTH = 4
SHEAR = ParamVector(0.0, 1.0, 0.0)
CARVE_PARAMS = (ParamVector(), SHEAR, SHEAR, ParamVector())


@dataclass(frozen=True)
class HairGadget:
    anchor: int
    chain: tuple  # (h1, h2, h3, h4), h1 adjacent to the anchor


def hair_gadgets(graph: ModeGraph) -> list:
    base = max(graph.nodes, default=-1) + 1
    return [HairGadget(v, tuple(base + HAIR_LENGTH * i + k for k in range(HAIR_LENGTH))) for i, v in enumerate(graph.nodes)]


def _interleave(original: ModeGraph, gadgets, carve=()) -> list:
    """Measurement order with each hair handled just before its anchor is needed.

    A kept node's hair is stripped (tip, h3, h2, h1) right before the node
    itself is measured; output hairs are stripped last.  A carved node's
    chain (v, h1..h4) runs before the first measurement of any of its
    neighbours, so its readout can still kick them.
    """
    carve = set(carve)
    by_anchor = {g.anchor: g for g in gadgets}
    done, order = set(), []

    def strip(v):
        h1, h2, h3, h4 = by_anchor[v].chain
        order.extend([h4, h3, h2, h1])

    def run_carve(v):
        if v not in done:
            done.add(v)
            order.extend((v,) + by_anchor[v].chain)

    for n in original.order:
        for v in sorted(original.neighbors(n)):
            if v in carve:
                run_carve(v)
        if n in carve:
            run_carve(n)
            continue
        strip(n)
        order.append(n)
    for v in sorted(carve):
        run_carve(v)
    for n in original.outputs:
        if n not in carve:
            strip(n)
    return order


def implant_hairs(graph: ModeGraph) -> ModeGraph:
    """Attach a hair to every node; every hair is stripped just before its anchor is measured."""
    gadgets = hair_gadgets(graph)
    edges = dict(graph.edges)
    for g in gadgets:
        path = (g.anchor,) + g.chain
        for a, b in zip(path, path[1:]):
            edges[_key(a, b)] = 1
    return ModeGraph(
        nodes=list(graph.nodes) + [h for g in gadgets for h in g.chain],
        edges=edges,
        inputs=list(graph.inputs),
        outputs=list(graph.outputs),
        order=_interleave(graph, gadgets),
        flow=dict(graph.flow),
    )


def hair_plan(original: ModeGraph, carve=()) -> tuple:
    """Haired graph, roles and per-node slot parameters with the given nodes carved out.

    Returns ``(graph, roles, params)``; ``params`` only lists hair slots.
    """
    carve = set(carve)
    haired = implant_hairs(original)
    gadgets = hair_gadgets(original)
    flow = {k: s for k, s in original.flow.items() if k not in carve and s not in carve}
    roles, params = {}, {}
    for g in gadgets:
        h1, h2, h3, h4 = g.chain
        if g.anchor in carve:
            path = (g.anchor,) + g.chain
            for a, b in zip(path[:-1], path[1:]):
                flow[a] = b
            for node, u in zip(path[:-1], CARVE_PARAMS):
                params[node] = u
                roles[node] = Role("wire")
            kicks = tuple((y, s) for y, s in sorted(original.neighbors(g.anchor).items()) if y not in carve)
            roles[h4] = Role("readout", kicks=kicks)
    kept_outputs = [n for n in original.outputs if n not in carve]
    graph = ModeGraph(
        nodes=haired.nodes,
        edges=haired.edges,
        inputs=[n for n in original.inputs if n not in carve],
        outputs=kept_outputs,
        order=_interleave(original, gadgets, carve),
        flow=flow,
    )
    base = default_roles(graph)
    base.update(roles)
    for g in gadgets:
        if g.anchor in carve:
            continue
        h1, h2, h3, h4 = g.chain
        base[h4] = Role("leaf", source=h3, sign=1, kicks=((h2, 1),))
        base[h3] = Role("discard")
        base[h2] = Role("leaf", source=h1, sign=1, kicks=((g.anchor, 1),))
        base[h1] = Role("discard")
    for n in graph.order:
        if n in carve or n in params:
            continue
        if base[n].kind == "wire" and n not in graph.flow:
            base[n] = Role("readout")
    return graph, base, params


def carve_fidelity(omega_hair: float, omega: float = 1.0, s: float = 0.4) -> float:
    """Carve the middle of a 3-node path through its hair (Gaussian backend).

    All hair outcomes are conditioned on 0 (no byproducts) and the tip on
    ``s``; the two end modes are compared with the direct q-projection of
    the middle node at ``s``.  ``omega`` is the squeezing of the three path
    nodes, ``omega_hair`` that of the hair resource.
    """
    path = ModeGraph(nodes=[0, 1, 2], edges={(0, 1): 1, (1, 2): 1}, outputs=[0, 1, 2])
    graph, roles, params = hair_plan(ModeGraph(nodes=[0, 1, 2], edges={(0, 1): 1, (1, 2): 1}, outputs=[0, 2]), carve=[1])
    from ..backends import make_squeezed_vacuum

    keep = {0, 1, 2}
    states = {n: make_squeezed_vacuum(omega if n in keep else omega_hair) for n in graph.nodes}
    st = build_graph_state(graph, node_states=states)
    live = list(graph.nodes)
    for node in graph.order:
        if roles[node].kind not in ("wire", "readout"):
            continue  # only the carve chain matters here; other hairs are removed by leaf measurements below
        u = params.get(node, ParamVector())
        value = s if roles[node].kind == "readout" else 0.0
        k = live.index(node)
        st, _ = st.project(k, value, ObservablePoly(u))
        live.pop(k)
    # remove the hairs of the end nodes: p on the tip and on h2 (outcome 0), discard h3, h1
    for node in graph.order:
        if node not in live or roles[node].kind not in ("leaf", "discard"):
            continue
        k = live.index(node)
        st, _ = st.project(k, 0.0)
        live.pop(k)
    assert sorted(live) == [0, 2], live
    ref = build_graph_state(path, omega=omega).apply_word(GateWord(3, (Fourier(1),)))
    ref, _ = ref.project(1, s)  # p after F is q
    return float(st.overlap(ref))


__all__ = ["CARVE_PARAMS", "HAIR_LENGTH", "HairGadget", "carve_fidelity", "hair_gadgets", "hair_plan", "implant_hairs", "leaf_role"]
