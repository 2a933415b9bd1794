"""Client (Alice) and server (Bob) state machines.

Alice owns every secret: the pre-rotations ``theta``, the outcome shifts
``r``, the program ``phi`` and the byproduct frames.  Bob owns the qumodes
(behind opaque handles in a :class:`QumodeStore`) and sees only the
messages.  Bob's measurement behaviour is a pluggable strategy.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..algebra.params import ParamVector, conjugate_p_by_phase_gate
from ..algebra.words import GateWord, PhaseQ
from ..backends import make_squeezed_vacuum
from ..graphs.hiding import disconnector_state
from .config import ExperimentConfig
from .frames import FrameTracker, compute_delta, frame_word_inverse
from .messages import Delta, Outcome, QumodeTransfer, Transcript
from .plans import ProtocolPlan


class QumodeStore:
    """Stand-in for the physical qumodes in transit: handle -> single-mode state."""

    def __init__(self):
        self._states = {}

    def put(self, state) -> str:
        handle = f"qm{len(self._states):05d}"
        self._states[handle] = state
        return handle

    def take(self, handle: str):
        return self._states.pop(handle)

    def __len__(self):
        return len(self._states)


def resource_state(config: ExperimentConfig):
    return make_squeezed_vacuum(config.omega, config.backend, config.cutoff, budget=config.budget)


def node_state(plan: ProtocolPlan, node: int, config: ExperimentConfig):
    """The unrotated single-mode state of ``node``: input state, disconnector or resource."""
    if node in plan.disconnectors:
        return disconnector_state(plan.disconnectors[node], config.omega_q, config.backend, config.cutoff)
    if node in plan.input_states:
        return plan.input_states[node]
    return resource_state(config)


def _phase(state, f: ParamVector):
    if f.is_zero:
        return state
    return state.apply_word(GateWord(1, (PhaseQ(0, f),)))


# ---------------------------------------------------------------------------
# Alice


@dataclass
class AliceSecret:
    """Everything Alice keeps to herself.  Never serialised into a message."""

    L: float
    L_theta: float
    theta: dict = field(default_factory=dict)  # node -> ParamVector
    r: dict = field(default_factory=dict)  # node -> float
    phi: dict = field(default_factory=dict)  # node -> ParamVector (the program)
    phi_prime: dict = field(default_factory=dict)  # node -> ParamVector used in the last delta
    theta_frame: dict = field(default_factory=dict)  # node -> M_xi theta at measurement time
    frames: dict = field(default_factory=dict)  # node -> (xi, eta) at measurement time
    deltas: dict = field(default_factory=dict)  # node -> ParamVector sent (Alice's copy)


def sample_secrets(plan: ProtocolPlan, config: ExperimentConfig, rng) -> AliceSecret:
    """theta ~ U[-L_theta, L_theta]^3 (no cubic part unless enabled), r ~ U[-L, L]; sampled up front."""
    sec = AliceSecret(L=config.L, L_theta=config.theta_width)
    lt = config.theta_width
    for n in plan.graph.nodes:
        a, b, c = rng.uniform(-lt, lt, size=3)
        sec.theta[n] = ParamVector(a, b, c if config.cubic_theta else 0.0)
        sec.r[n] = float(rng.uniform(-config.L, config.L))
        sec.phi[n] = plan.phi_of(n)
    return sec


class Alice:
    def __init__(self, plan: ProtocolPlan, config: ExperimentConfig, rng):
        self.plan = plan
        self.config = config
        self.secret = sample_secrets(plan, config, rng)
        self.tracker = FrameTracker(plan.graph, plan.roles, plan.disconnector_kicks())
        self.handles = {}

    def prepare(self, node: int, store: QumodeStore) -> QumodeTransfer:
        """Send ``S_q(-theta) |0, Omega>_p`` (or the pre-rotated input / disconnector state)."""
        state = _phase(node_state(self.plan, node, self.config), -self.secret.theta[node])
        handle = store.put(state)
        self.handles[node] = handle
        return QumodeTransfer(node, handle)

    def compute_delta(self, node: int) -> Delta:
        xi, eta = self.tracker.frame(node)
        theta_f = self.tracker.theta_in_frame(node, self.secret.theta[node])
        phi_prime = self.secret.phi[node]
        dc = compute_delta(xi, eta, theta_f, self.secret.r[node], phi_prime)
        self.secret.phi_prime[node] = phi_prime
        self.secret.theta_frame[node] = theta_f
        self.secret.frames[node] = (xi, eta)
        self.secret.deltas[node] = dc.delta
        return Delta(node, dc.delta)

    def receive(self, msg: Outcome) -> float:
        """Fold Bob's outcome into the frames; returns the effective outcome ``m - r``."""
        m_eff = float(msg.value) - self.secret.r[msg.mode]
        self.tracker.update(msg.mode, m_eff)
        return m_eff

    def correct_outputs(self, state, live: list):
        """Undo the pre-rotations and byproducts on the returned output modes.

        ``live`` lists the node held by each mode of ``state``; the result
        has its modes in ``plan.graph.outputs`` order.
        """
        if state is None:
            return None
        index = {n: k for k, n in enumerate(live)}
        frames = {n: self.tracker.frame(n) for n in live}
        atoms = frame_word_inverse(frames, index)
        atoms += tuple(PhaseQ(index[n], self.secret.theta[n]) for n in live if not self.secret.theta[n].is_zero)
        if atoms:
            state = state.apply_word(GateWord(len(live), atoms))
        return permute_modes(state, [index[n] for n in self.plan.graph.outputs])


def permute_modes(state, perm: list):
    """State whose mode ``i`` is mode ``perm[i]`` of ``state``."""
    if list(perm) == list(range(len(perm))):
        return state
    if hasattr(state, "amps"):
        from ..backends import FockState

        return FockState(np.transpose(state.amps, perm), state.leakage, state.budget)
    return state.reduced(perm)


# ---------------------------------------------------------------------------
# Bob


class HonestBob:
    """Applies ``S_q(delta)`` and measures ``p`` (``path="gate"``), or measures the
    equivalent observable ``p + delta_a + delta_b q + delta_c q^2`` directly."""

    def __init__(self, path: str = "gate"):
        if path not in ("gate", "observable"):
            raise ValueError(f"unknown measurement path {path!r}")
        self.path = path

    def measure(self, delta: ParamVector, state, mode: int, transcript: Transcript, rng):
        if self.path == "gate":
            n = state.n_modes
            if not delta.is_zero:
                state = state.apply_word(GateWord(n, (PhaseQ(mode, delta),)))
            return state.homodyne(mode, rng=rng)
        return state.homodyne(mode, conjugate_p_by_phase_gate(delta), rng=rng)


class Bob:
    """Server: holds received qumodes, answers each Delta with one Outcome.

    ``strategy.measure(delta, state, mode, transcript, rng) -> (value, post)``
    sees only what the server legitimately has: the delta, its own state and
    the transcript so far.
    """

    def __init__(self, store: QumodeStore, strategy=None, rng=None):
        self.store = store
        self.strategy = HonestBob() if strategy is None else strategy
        self.rng = np.random.default_rng() if rng is None else rng
        self.handles = {}

    def receive_transfer(self, msg: QumodeTransfer) -> None:
        self.handles[msg.mode] = msg.handle

    def load(self, node: int):
        return self.store.take(self.handles[node])

    def answer(self, msg: Delta, state, mode: int, transcript: Transcript):
        value, post = self.strategy.measure(msg.delta, state, mode, transcript, self.rng)
        return Outcome(msg.mode, float(value)), post


__all__ = [
    "Alice",
    "AliceSecret",
    "Bob",
    "HonestBob",
    "QumodeStore",
    "node_state",
    "permute_modes",
    "resource_state",
    "sample_secrets",
]
