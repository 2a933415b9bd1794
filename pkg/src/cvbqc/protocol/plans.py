"""What the client asks the server to run: graph, roles, per-node programs.

A :class:`ProtocolPlan` is the complete classical description held by the
client.  The graph (edges and the public measurement order) is shared with
the server; roles, programs, disconnector values and input states are not.
Three strategies build plans: brickwork, hair implantation and graph
hiding; any flow graph can also be used directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..algebra.params import ParamVector
from ..algebra.words import ControlledZ, Fourier, GateWord, PhaseQ
from ..graphs.brickwork import BrickworkLayout
from ..graphs.hair import hair_plan
from ..graphs.hiding import HiddenGraphSpec
from ..graphs.modegraph import ModeGraph
from ..graphs.roles import Role, default_roles

ZERO = ParamVector()
STRATEGIES = ("brickwork", "hair", "hidden", "graph")


@dataclass
class ProtocolPlan:
    graph: ModeGraph
    phi: dict = field(default_factory=dict)  # measured node -> ParamVector (missing = zero)
    roles: dict | None = None
    disconnectors: dict = field(default_factory=dict)  # node -> s (q eigenvalue)
    input_states: dict = field(default_factory=dict)  # node -> single-mode state (backend-specific)
    logical: ModeGraph | None = None  # graph whose wires define the ideal circuit
    logical_phi: dict | None = None
    strategy: str = "graph"

    def __post_init__(self):
        if self.roles is None:
            self.roles = default_roles(self.graph)
        for n in self.graph.order:
            if self.roles[n].kind == "output":
                raise ValueError(f"measured node {n} has the output role")
        for k, s in self.graph.flow.items():
            if self.graph.sign(k, s) != 1:
                raise ValueError(f"flow edge {k} -> {s} must be a CZ (sign +1)")
        self.phi = {int(k): _pv(v) for k, v in self.phi.items()}
        self.disconnectors = {int(k): float(v) for k, v in self.disconnectors.items()}
        if self.logical is None:
            self.logical = self.graph
        if self.logical_phi is None:
            self.logical_phi = dict(self.phi)

    def phi_of(self, node: int) -> ParamVector:
        return self.phi.get(node, ZERO)

    @property
    def measured(self) -> list:
        return list(self.graph.order)

    def disconnector_kicks(self) -> dict:
        """Initial Z shifts ``sign * s`` that disconnectors leave on their neighbours."""
        kicks = {}
        for d, s in self.disconnectors.items():
            for n, sign in self.graph.neighbors(d).items():
                kicks[n] = kicks.get(n, 0.0) + sign * s
        return kicks


def _pv(v) -> ParamVector:
    return v if isinstance(v, ParamVector) else ParamVector.from_array(v)


# ---------------------------------------------------------------------------
# strategies


def graph_plan(graph: ModeGraph, phi=None, **kw) -> ProtocolPlan:
    return ProtocolPlan(graph=graph, phi=dict(phi or {}), strategy="graph", **kw)


def brickwork_plan(layout: BrickworkLayout, **kw) -> ProtocolPlan:
    """Every node of the layout in the public column-major order; programs from ``layout.params``."""
    return ProtocolPlan(graph=layout.graph(), phi=dict(layout.params), strategy="brickwork", **kw)


def hair_strategy_plan(original: ModeGraph, phi=None, carve=(), **kw) -> ProtocolPlan:
    """Haired resource; the hairs of kept nodes are removed, carved nodes are teleported out."""
    graph, roles, params = hair_plan(original, carve)
    carve = set(carve)
    programs = {n: v for n, v in (phi or {}).items() if n not in carve}
    programs.update(params)
    logical = original.induced([n for n in original.nodes if n not in carve])
    return ProtocolPlan(
        graph=graph,
        phi=programs,
        roles=roles,
        logical=logical,
        logical_phi={n: v for n, v in (phi or {}).items() if n in set(logical.nodes)},
        strategy="hair",
        **kw,
    )


def hidden_plan(spec: HiddenGraphSpec, phi=None, **kw) -> ProtocolPlan:
    """Host graph run in the logical order; each disconnector is measured (outcome
    discarded) as soon as the byproducts it could pick up are known."""
    logical = spec.logical
    discs = spec.disconnectors
    deps = {d: set() for d in discs}
    for k, succ in logical.flow.items():
        for l in spec.host.neighbors(succ):
            if l in deps:
                deps[l].add(k)
    order = [d for d in discs if not deps[d]]
    for n in logical.order:
        order.append(n)
        done = set(order)
        order += [d for d in discs if d not in done and deps[d] and deps[d] <= done]
    graph = ModeGraph(
        nodes=spec.host.nodes,
        edges=spec.host.edges,
        inputs=logical.inputs,
        outputs=logical.outputs,
        order=order,
        flow=logical.flow,
    )
    roles = default_roles(graph)
    for d in discs:
        roles[d] = Role("discard")
    for n in logical.order:
        roles[n] = Role("wire") if n in logical.flow else Role("readout")
    return ProtocolPlan(
        graph=graph,
        phi=dict(phi or {}),
        roles=roles,
        disconnectors=dict(spec.s),
        logical=logical,
        strategy="hidden",
        **kw,
    )


# ---------------------------------------------------------------------------
# the ideal circuit


def wires(graph: ModeGraph) -> list:
    """Flow chains starting at the inputs; every node must lie on exactly one chain."""
    chains, seen = [], set()
    for start in graph.inputs:
        chain = [start]
        while chain[-1] in graph.flow:
            chain.append(graph.flow[chain[-1]])
        chains.append(chain)
        seen.update(chain)
    if seen != set(graph.nodes) or sum(map(len, chains)) != len(graph.nodes):
        raise ValueError("graph is not a disjoint union of flow chains from its inputs")
    return chains


def logical_word(graph: ModeGraph, phi: dict) -> tuple:
    """Ideal (infinite-squeezing, zero-outcome) circuit of a wire-structured graph.

    Mode ``i`` of the returned word is the wire starting at ``graph.inputs[i]``.
    Cross-wire edges join nodes of equal depth and act just before that
    depth's teleportation step ``F D_q(phi)``.  Returns ``(word, chains)``.
    """
    chains = wires(graph)
    depth = {n: (w, d) for w, ch in enumerate(chains) for d, n in enumerate(ch)}
    cross = {}
    for (i, j), s in graph.edges.items():
        (wi, di), (wj, dj) = depth[i], depth[j]
        if wi == wj:
            if abs(di - dj) != 1:
                raise ValueError(f"edge {(i, j)} skips along a wire")
            continue
        if di != dj:
            raise ValueError(f"cross edge {(i, j)} joins different depths")
        cross.setdefault(di, []).append((wi, wj, s))
    atoms = []  # application order
    for d in range(max(map(len, chains))):
        for wi, wj, s in cross.get(d, []):
            atoms.append(ControlledZ(wi, wj, s))
        for w, ch in enumerate(chains):
            if d < len(ch) - 1:
                atoms.append(PhaseQ(w, _pv(phi.get(ch[d], ZERO))))
                atoms.append(Fourier(w))
    return GateWord(len(chains), tuple(reversed(atoms))), chains


__all__ = [
    "STRATEGIES",
    "ProtocolPlan",
    "brickwork_plan",
    "graph_plan",
    "hair_strategy_plan",
    "hidden_plan",
    "logical_word",
    "wires",
]
