"""State comparison metrics."""

from __future__ import annotations

import numpy as np

from ..exceptions import ShapeMismatch
from .fock import FockState
from .gaussian import GaussianState


def fidelity(s1, s2) -> float:
    """|<s1|s2>|^2 for Fock states; Tr(rho1 rho2) (the fidelity for pure states) for Gaussian states."""
    if isinstance(s1, GaussianState) and isinstance(s2, GaussianState):
        return s1.overlap(s2)
    if isinstance(s1, FockState) and isinstance(s2, FockState):
        if s1.cutoffs != s2.cutoffs:
            raise ShapeMismatch(f"cutoffs differ: {s1.cutoffs} vs {s2.cutoffs}")
        ov = np.vdot(s1.amps, s2.amps) / (s1.norm * s2.norm)
        return float(min(1.0, abs(ov) ** 2))
    raise ShapeMismatch("fidelity needs two states of the same backend")


def reduced_density(state: FockState, keep) -> np.ndarray:
    return state.reduced_density(keep)


def trace_distance(rho1, rho2) -> float:
    rho1, rho2 = np.asarray(rho1), np.asarray(rho2)
    if rho1.shape != rho2.shape:
        raise ShapeMismatch(f"density matrices of shape {rho1.shape} and {rho2.shape}")
    ev = np.linalg.eigvalsh(0.5 * ((rho1 - rho2) + (rho1 - rho2).conj().T))
    return float(min(1.0, 0.5 * np.sum(np.abs(ev))))


def fuchs_van_de_graaf(overlap: float) -> tuple[float, float]:
    """Trace-distance bounds (lower, upper) from the fidelity of a pure-state pair."""
    f = float(np.clip(overlap, 0.0, 1.0))
    return float(1.0 - np.sqrt(f)), float(np.sqrt(1.0 - f))
