"""Batch construction of graph states on either backend."""

from __future__ import annotations

from ..algebra.words import ControlledZ, GateWord
from ..backends import make_squeezed_vacuum
from ..backends.fock import DEFAULT_BUDGET, FockState
from ..exceptions import CapacityError
from .modegraph import ModeGraph

MAX_FOCK_MODES = 4


def node_word(graph: ModeGraph, edge_order=None) -> GateWord:
    """All signed CZ gates of the graph as one word (mode index = position in ``graph.nodes``)."""
    idx = {n: k for k, n in enumerate(graph.nodes)}
    edges = list(graph.edges.items()) if edge_order is None else [(e, graph.edges[e]) for e in edge_order]
    return GateWord(len(graph.nodes), tuple(ControlledZ(idx[i], idx[j], s) for (i, j), s in edges))


def build_graph_state(graph: ModeGraph, backend: str = "gaussian", omega: float = 0.5, cutoff: int = 40,
                      node_states=None, edge_order=None, budget: float = DEFAULT_BUDGET):
    """Every node in |0, Omega>_p (or ``node_states[n]``), then every signed edge as CZ / CZ^dagger."""
    n = len(graph.nodes)
    if n == 0:
        raise ValueError("empty graph")
    if backend == "fock" and n > MAX_FOCK_MODES:
        raise CapacityError(f"Fock backend holds at most {MAX_FOCK_MODES} modes at once; graph has {n} (use the streamed executor)")
    node_states = node_states or {}
    state = None
    for node in graph.nodes:
        s = node_states.get(node)
        if s is None:
            s = make_squeezed_vacuum(omega, backend, cutoff, budget=budget) if backend == "fock" else make_squeezed_vacuum(omega)
        state = s if state is None else state.tensor(s)
    if graph.edges:
        state = state.apply_word(node_word(graph, edge_order))
    return state


__all__ = ["MAX_FOCK_MODES", "FockState", "build_graph_state", "node_word"]
