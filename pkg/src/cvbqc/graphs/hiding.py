"""Graph hiding with disconnector qumodes.

``CZ (|psi> (x) |s>_q) = (Z(s)|psi>) (x) |s>_q``: a node prepared in a q
eigenstate cuts every edge it touches, leaving a known ``Z(sign * s)`` on
each neighbour.  The server entangles the full host graph and cannot tell
disconnectors from computational nodes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..algebra.words import Fourier, GateWord, Xdisp, Zdisp
from ..backends import FockState, GaussianState, make_squeezed_vacuum
from ..backends.metrics import fuchs_van_de_graaf
from ..exceptions import NoEmbedding
from .builder import build_graph_state
from .modegraph import ModeGraph


@dataclass
class HiddenGraphSpec:
    host: ModeGraph
    classification: dict  # node -> "computational" | "disconnector"
    s: dict  # disconnector -> s
    logical: ModeGraph
    corrections: dict = field(default_factory=dict)  # computational node -> total Z shift

    @property
    def disconnectors(self) -> list:
        return [n for n in self.host.nodes if self.classification[n] == "disconnector"]

    def to_dict(self) -> dict:
        return {
            "host": self.host.to_dict(),
            "logical": self.logical.to_dict(),
            "classification": {str(k): v for k, v in self.classification.items()},
            "s": {str(k): v for k, v in self.s.items()},
            "corrections": {str(k): v for k, v in self.corrections.items()},
        }


def hide_graph(logical: ModeGraph, host: ModeGraph, rng=None, s_range: float = 1.0, s_values=None) -> HiddenGraphSpec:
    """Embed ``logical`` in ``host`` (declared embedding: node ids coincide)."""
    extra = set(logical.nodes) - set(host.nodes)
    if extra:
        raise NoEmbedding(f"logical nodes {sorted(extra)} are not in the host")
    keep = set(logical.nodes)
    induced = {e: s for e, s in host.edges.items() if e[0] in keep and e[1] in keep}
    if induced != logical.edges:
        missing = sorted(set(logical.edges) - set(induced))
        surplus = sorted(set(induced) - set(logical.edges))
        wrong = sorted(e for e in set(induced) & set(logical.edges) if induced[e] != logical.edges[e])
        raise NoEmbedding(f"not an induced subgraph: missing {missing}, surplus {surplus}, sign mismatch {wrong}")
    rng = np.random.default_rng() if rng is None else rng
    classification = {n: ("computational" if n in keep else "disconnector") for n in host.nodes}
    discs = [n for n in host.nodes if n not in keep]
    s_values = dict(s_values or {})
    s = {d: float(s_values[d]) if d in s_values else float(rng.uniform(-s_range, s_range)) for d in discs}
    corrections = {}
    for d in discs:
        for n, sign in host.neighbors(d).items():
            if n in keep:
                corrections[n] = corrections.get(n, 0.0) + sign * s[d]
    return HiddenGraphSpec(host, classification, s, logical, corrections)


def disconnector_state(s: float, omega_q: float, backend: str = "gaussian", cutoff: int = 40):
    """q-squeezed vacuum displaced to ``s``: Var(q) = omega_q^2 / 2 (the ideal |s>_q as omega_q -> 0)."""
    word = GateWord(1, (Xdisp(0, s), Fourier(0)))
    if backend == "gaussian":
        return GaussianState.squeezed_vacuum(omega_q).apply_word(word)
    return FockState.squeezed_vacuum(omega_q, cutoff).apply_word(word)


def hidden_graph_state(spec: HiddenGraphSpec, omega: float, omega_q: float, backend: str = "gaussian", cutoff: int = 40):
    states = {d: disconnector_state(spec.s[d], omega_q, backend, cutoff) for d in spec.disconnectors}
    return build_graph_state(spec.host, backend, omega, cutoff, node_states=states)


def logical_reference(spec: HiddenGraphSpec, omega: float) -> GaussianState:
    """Logical graph state with the recorded Z(s) corrections applied (Gaussian)."""
    st = build_graph_state(spec.logical, "gaussian", omega)
    idx = {n: k for k, n in enumerate(spec.logical.nodes)}
    atoms = tuple(Zdisp(idx[n], z) for n, z in sorted(spec.corrections.items()))
    return st.apply_word(GateWord(len(idx), atoms)) if atoms else st


def hiding_report(spec: HiddenGraphSpec, omega: float, omega_q: float) -> dict:
    """Distance between the computational modes of the host state and the logical reference."""
    st = hidden_graph_state(spec, omega, omega_q)
    pos = {n: k for k, n in enumerate(spec.host.nodes)}
    reduced = st.reduced([pos[n] for n in spec.logical.nodes])
    f = reduced.overlap(logical_reference(spec, omega))
    lo, hi = fuchs_van_de_graaf(f)
    return {"omega_q": omega_q, "fidelity": f, "trace_distance_lower": lo, "trace_distance_upper": hi}


def disconnector_mutual_information(omega_q: float, omega: float = 0.5, s: float = 0.4) -> float:
    """Mutual information (nats) between the ends of a 3-path whose middle node is a disconnector."""
    host = ModeGraph(nodes=[0, 1, 2], edges={(0, 1): 1, (1, 2): 1}, outputs=[0, 1, 2])
    logical = ModeGraph(nodes=[0, 2], outputs=[0, 2])
    spec = hide_graph(logical, host, s_values={1: s})
    st = hidden_graph_state(spec, omega, omega_q)
    return st.mutual_information(0, 2)
