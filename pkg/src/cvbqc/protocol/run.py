"""Drive a full protocol run over the channel on a streamed simulator.

Step 1: Alice sends every qumode.  Bob entangles them following the public
temporal schedule (nodes materialise just before they are needed).  Steps
2-4: for each node in the public order Alice sends ``Delta``, Bob measures
and answers with ``Outcome``, Alice updates her frames.  Finally Alice
corrects the returned output modes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..algebra.params import ObservablePoly
from ..algebra.words import GateWord
from ..graphs.builder import MAX_FOCK_MODES
from ..graphs.schedule import execute_plan, temporal_schedule
from .config import ExperimentConfig
from .frames import FrameTracker, frame_word_inverse, nonblind_params, reconstruct_theta
from .messages import Channel, Transcript
from .parties import Alice, Bob, HonestBob, QumodeStore, node_state, permute_modes
from .plans import ProtocolPlan


@dataclass
class ProtocolResult:
    outcomes: dict  # node -> raw outcome m reported by Bob
    effective: dict  # node -> m - r (Alice's view)
    output: object  # Alice's corrected output state (modes in graph.outputs order) or None
    readouts: dict  # node -> logical classical value
    transcript: Transcript
    alice: Alice = field(repr=False)
    max_live: int = 0

    def reconstruction_errors(self) -> list:
        """``|M_xi delta - phi' + eta e - r e - M_xi theta|_inf`` for every measured node."""
        sec = self.alice.secret
        errs = []
        for msg in self.transcript.deltas:
            n = msg.mode
            xi, eta = sec.frames[n]
            got = reconstruct_theta(xi, eta, msg.delta, sec.r[n], sec.phi_prime[n])
            errs.append(float(np.max(np.abs((got - sec.theta_frame[n]).as_array()))))
        return errs


def _max_modes(config: ExperimentConfig):
    return MAX_FOCK_MODES if config.backend == "fock" else None


def run_protocol(plan: ProtocolPlan, config: ExperimentConfig, rng=None, strategy=None) -> ProtocolResult:
    """Blind run; ``rng`` defaults to one seeded from ``config.seed``.

    Alice and Bob draw from independent substreams of the same seed.
    """
    rng = np.random.default_rng(config.seed) if rng is None else rng
    alice_rng, bob_rng = rng.spawn(2) if hasattr(rng, "spawn") else (rng, rng)

    store = QumodeStore()
    alice = Alice(plan, config, alice_rng)
    bob = Bob(store, strategy or HonestBob(config.bob_path), bob_rng)
    channel = Channel(order=plan.graph.order)

    # step 1: every qumode up front
    for node in plan.graph.nodes:
        channel.send_to_bob(alice.prepare(node, store))
        bob.receive_transfer(channel.bob_receive())

    outcomes, effective = {}, {}

    def measure(node, state, k):
        channel.send_to_bob(alice.compute_delta(node))
        msg = channel.bob_receive()
        reply, post = bob.answer(msg, state, k, channel.transcript)
        channel.send_to_alice(reply)
        got = channel.alice_receive()
        outcomes[node] = got.value
        effective[node] = alice.receive(got)
        return post

    sched = temporal_schedule(plan.graph)
    state, live, max_live = execute_plan(sched, bob.load, measure, max_modes=_max_modes(config))
    channel.close()
    output = alice.correct_outputs(state, live)
    return ProtocolResult(outcomes, effective, output, dict(alice.tracker.readouts), channel.transcript, alice, max_live)


def run_twin(plan: ProtocolPlan, config: ExperimentConfig, effective: dict):
    """Non-blind MBQC on fresh resources with every outcome forced to ``effective[node]``.

    No pre-rotations, no shifts: node ``j`` is measured with
    ``u = M_xi^{-1}(phi - eta e)``.  Returns ``(output, log_density, readouts)``
    where ``log_density`` is the log of the joint outcome density.
    """
    tracker = FrameTracker(plan.graph, plan.roles, plan.disconnector_kicks())
    logp = [0.0]

    def measure(node, state, k):
        xi, eta = tracker.frame(node)
        u = nonblind_params(xi, eta, plan.phi_of(node))
        post, dens = state.project(k, effective[node], ObservablePoly(u))
        logp[0] += float(np.log(dens)) if dens > 0 else -np.inf
        tracker.update(node, effective[node])
        return post

    sched = temporal_schedule(plan.graph)
    state, live, _ = execute_plan(sched, lambda n: node_state(plan, n, config), measure, max_modes=_max_modes(config))
    output = None
    if state is not None:
        index = {n: k for k, n in enumerate(live)}
        atoms = frame_word_inverse({n: tracker.frame(n) for n in live}, index)
        if atoms:
            state = state.apply_word(GateWord(len(live), atoms))
        output = permute_modes(state, [index[n] for n in plan.graph.outputs])
    return output, logp[0], dict(tracker.readouts)


__all__ = ["ProtocolResult", "run_protocol", "run_twin"]
