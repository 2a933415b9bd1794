"""Numerical backends: Gaussian covariance matrices and truncated Fock amplitudes."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from ..algebra.params import ObservablePoly
from ..algebra.words import GateWord
from .fock import DEFAULT_BUDGET, FockState, postselect_average, q_phase_family, suggest_cutoff
from .gaussian import GaussianState
from .metrics import fidelity, fuchs_van_de_graaf, reduced_density, trace_distance
from .serialization import dumps_state, load_state, loads_state, save_state


@dataclass(frozen=True)
class HomodyneOutcome:
    mode: int
    observable: ObservablePoly
    value: float
    post_state: Any


def make_squeezed_vacuum(omega: float, backend: str = "gaussian", cutoff: int = 40, n_modes: int = 1, budget: float = DEFAULT_BUDGET):
    """|0, Omega>_p on ``n_modes`` modes."""
    if backend == "gaussian":
        return GaussianState.squeezed_vacuum(omega, n_modes)
    if backend == "fock":
        state = FockState.squeezed_vacuum(omega, cutoff, budget)
        for _ in range(n_modes - 1):
            state = state.tensor(FockState.squeezed_vacuum(omega, cutoff, budget))
        return state
    raise ValueError(f"unknown backend {backend!r}")


def apply_word(state, word: GateWord):
    return state.apply_word(word)


def homodyne(state, mode: int, observable: ObservablePoly = ObservablePoly(), rng=None) -> HomodyneOutcome:
    value, post = state.homodyne(mode, observable, rng)
    return HomodyneOutcome(mode, observable, value, post)


def project(state, mode: int, value: float, observable: ObservablePoly = ObservablePoly()):
    """Condition on a given outcome; returns ``(post_state, density)``."""
    return state.project(mode, value, observable)


__all__ = [
    "DEFAULT_BUDGET",
    "FockState",
    "GaussianState",
    "HomodyneOutcome",
    "apply_word",
    "dumps_state",
    "fidelity",
    "fuchs_van_de_graaf",
    "homodyne",
    "load_state",
    "loads_state",
    "make_squeezed_vacuum",
    "postselect_average",
    "project",
    "q_phase_family",
    "reduced_density",
    "save_state",
    "suggest_cutoff",
    "trace_distance",
]
