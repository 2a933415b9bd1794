"""Client-side feed-forward: byproduct frames and the measurement corrections.

Before node ``j`` is measured its logical state carries ``X(xi_j) Z(eta_j)``.
Because ``D_q^v X(m) = X(m) D_q^{M_m v}`` and the final ``p`` readout
ignores an X on the measured mode, the wanted ``D_q^phi`` is obtained with

    u = M_xi^{-1} (phi - eta e)                     (non-blind)
    delta = M_xi^{-1} (phi' + theta_f + (r - eta) e)   (blind)

where ``theta_f = M_xi theta`` is the client's pre-rotation ``S_q(-theta)``
seen through the frame (the pre-rotation sits outside the byproduct).  The
blind outcome is the non-blind one shifted by ``r``; the client subtracts
it and feeds ``m - r`` forward.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..algebra.params import E_LINEAR, ParamVector, apply_mm, mm_inverse, mm_matrix
from ..algebra.words import Xdisp, Zdisp
from ..graphs.modegraph import ModeGraph
from ..graphs.roles import Role, default_roles

ZERO = ParamVector()


@dataclass(frozen=True)
class DeltaComputation:
    w: ParamVector
    delta: ParamVector
    k: ParamVector  # M_xi delta - phi' + eta e


def compute_delta(xi: float, eta: float, theta_f: ParamVector, r: float, phi_prime: ParamVector) -> DeltaComputation:
    """``w = (a' + a - eta + r, b' + b, c' + c)`` and ``delta = M_xi^{-1} w``.

    ``theta_f`` is the pre-rotation in the frame of the measured mode.
    """
    w = phi_prime + theta_f + E_LINEAR.scale(r - eta)
    delta = ParamVector.from_array(mm_inverse(xi) @ w.as_array())
    k = ParamVector.from_array(mm_matrix(xi) @ delta.as_array()) - phi_prime + E_LINEAR.scale(eta)
    return DeltaComputation(w, delta, k)


def reconstruct_theta(xi: float, eta: float, delta: ParamVector, r: float, phi_prime: ParamVector) -> ParamVector:
    """``M_xi delta - phi' + eta e - r e``; equals the framed pre-rotation ``theta_f``."""
    return ParamVector.from_array(mm_matrix(xi) @ delta.as_array()) - phi_prime + E_LINEAR.scale(eta - r)


def nonblind_params(xi: float, eta: float, phi: ParamVector) -> ParamVector:
    return ParamVector.from_array(mm_inverse(xi) @ (phi - E_LINEAR.scale(eta)).as_array())


class FrameTracker:
    """Per-node ``(xi, eta)`` and the role-driven update after each outcome."""

    def __init__(self, graph: ModeGraph, roles=None, initial_eta=None):
        self.graph = graph
        self.roles = default_roles(graph) if roles is None else dict(roles)
        self.xi = {n: 0.0 for n in graph.nodes}
        self.eta = {n: 0.0 for n in graph.nodes}
        for n, z in (initial_eta or {}).items():
            self.eta[n] += float(z)
        self.measured = set()
        self.readouts = {}  # node -> logical value (readout roles and leaf q values)
        self.history = []  # (node, m_eff)

    def frame(self, node: int) -> tuple:
        return self.xi[node], self.eta[node]

    def theta_in_frame(self, node: int, theta: ParamVector) -> ParamVector:
        return apply_mm(self.xi[node], theta)

    def update(self, node: int, m_eff: float) -> None:
        """Record the effective outcome ``m - r`` of ``node`` and push its byproducts."""
        role: Role = self.roles[node]
        self.measured.add(node)
        self.history.append((node, float(m_eff)))
        if role.kind == "wire":
            succ = self.graph.flow[node]
            self.xi[succ] += m_eff
            for l, s in self.graph.neighbors(succ).items():
                if l != node and l not in self.measured:
                    self.eta[l] += s * m_eff
        elif role.kind == "readout":
            self.readouts[node] = float(m_eff)
            for y, s in role.kicks:
                self.eta[y] += s * m_eff
        elif role.kind == "leaf":
            q = role.sign * m_eff
            self.readouts[node] = float(q)
            for y, s in role.kicks:
                self.eta[y] += s * q
        elif role.kind == "discard":
            pass
        else:
            raise ValueError(f"node {node} with role {role.kind!r} is not measured")

    def output_frames(self) -> dict:
        return {n: (self.xi[n], self.eta[n]) for n in self.graph.outputs}


def frame_word_inverse(frames: dict, index: dict):
    """Atoms undoing ``X(xi) Z(eta)`` on each listed node (operator order)."""
    atoms = []
    for n, (xi, eta) in frames.items():
        if eta != 0.0:
            atoms.append(Zdisp(index[n], -eta))
        if xi != 0.0:
            atoms.append(Xdisp(index[n], -xi))
    return tuple(atoms)


__all__ = [
    "DeltaComputation",
    "FrameTracker",
    "compute_delta",
    "frame_word_inverse",
    "nonblind_params",
    "reconstruct_theta",
]
