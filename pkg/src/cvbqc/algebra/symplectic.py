"""Symplectic semantics of Gaussian gate words.

Every Gaussian unitary is stored as

.. math:: U = e^{i\\,\\mathrm{phase}}\\; W(d)\\; M(S),

where ``W(d) = prod_k Z_k(eta_k) X_k(xi_k)`` with ``d = (xi_1, eta_1, ...)``
and ``M(S)`` is the displacement-free linear part.  In the Heisenberg picture
``U^dagger r U = S r + d`` for the quadrature vector ``r = (q_1, p_1, ...)``.

The phase is the one generated by reordering Weyl operators (for example
``X(s) Z(t) = e^{-ist} Z(t) X(s)``).  Linear parts carry no phase of their
own: ``F = exp(i pi n / 2)`` and the shears/squeezers are taken as fixed
representatives, so two words with equal ``(S, d, phase)`` agree as
operators up to the sign ambiguity of the metaplectic representation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..exceptions import NonGaussianWord
from .words import (
    ControlledX,
    ControlledZ,
    Fourier,
    GateWord,
    PhaseP,
    PhaseQ,
    Squeeze,
    Xdisp,
    Zdisp,
)

TWO_PI = 2.0 * math.pi

_R = np.array([[0.0, -1.0], [1.0, 0.0]])  # F: q -> -p, p -> q


def symplectic_form(n_modes: int) -> np.ndarray:
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def wrap_phase(phi: float) -> float:
    """Map to (-pi, pi]."""
    phi = math.fmod(phi, TWO_PI)
    if phi <= -math.pi:
        phi += TWO_PI
    elif phi > math.pi:
        phi -= TWO_PI
    return phi


def phase_distance(a: float, b: float) -> float:
    return abs(wrap_phase(a - b))


def _xi_eta(d: np.ndarray):
    return d[0::2], d[1::2]


@dataclass(frozen=True)
class SymplecticRep:
    S: np.ndarray
    d: np.ndarray
    phase: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "S", np.asarray(self.S, dtype=float))
        object.__setattr__(self, "d", np.asarray(self.d, dtype=float))
        object.__setattr__(self, "phase", wrap_phase(float(self.phase)))

    @property
    def n_modes(self) -> int:
        return self.S.shape[0] // 2

    @classmethod
    def identity(cls, n_modes: int) -> "SymplecticRep":
        return cls(np.eye(2 * n_modes), np.zeros(2 * n_modes), 0.0)

    @classmethod
    def displacement(cls, d, phase: float = 0.0) -> "SymplecticRep":
        d = np.asarray(d, dtype=float)
        return cls(np.eye(d.size), d, phase)

    def __matmul__(self, other: "SymplecticRep") -> "SymplecticRep":
        return self.compose(other)

    def compose(self, other: "SymplecticRep") -> "SymplecticRep":
        """Operator product ``self * other`` (``other`` acts first)."""
        d2p = self.S @ other.d
        xi2, eta2 = _xi_eta(other.d)
        xi2p, eta2p = _xi_eta(d2p)
        xi1, _ = _xi_eta(self.d)
        # M1 W(d2) M1^dagger = e^{i chi} W(S1 d2); then W(a) W(b) = e^{-i xi_a.eta_b} W(a + b)
        chi = 0.5 * (xi2 @ eta2 - xi2p @ eta2p)
        phase = self.phase + other.phase + chi - xi1 @ eta2p
        return SymplecticRep(self.S @ other.S, self.d + d2p, phase)

    def inverse(self) -> "SymplecticRep":
        xi, eta = _xi_eta(self.d)
        n = self.n_modes
        linear_inv = SymplecticRep(np.linalg.inv(self.S), np.zeros(2 * n), 0.0)
        # W(d)^{-1} = e^{-i xi.eta} W(-d)
        disp_inv = SymplecticRep(np.eye(2 * n), -self.d, -(xi @ eta))
        out = linear_inv @ disp_inv
        return out.with_phase(out.phase - self.phase)

    def with_phase(self, phase: float) -> "SymplecticRep":
        return SymplecticRep(self.S, self.d, phase)

    @property
    def is_displacement(self) -> bool:
        return bool(np.allclose(self.S, np.eye(self.S.shape[0]), atol=1e-12))

    def is_symplectic(self, tol: float = 1e-9) -> bool:
        omega = symplectic_form(self.n_modes)
        return bool(np.max(np.abs(self.S @ omega @ self.S.T - omega)) <= tol)

    def deviation(self, other: "SymplecticRep") -> dict:
        return {
            "S": float(np.max(np.abs(self.S - other.S), initial=0.0)),
            "d": float(np.max(np.abs(self.d - other.d), initial=0.0)),
            "phase": phase_distance(self.phase, other.phase),
        }

    def allclose(self, other: "SymplecticRep", tol: float = 1e-9, projective: bool = False) -> bool:
        dev = self.deviation(other)
        ok = dev["S"] <= tol and dev["d"] <= tol
        return ok if projective else ok and dev["phase"] <= tol


def _embed_single(n_modes: int, mode: int, block: np.ndarray, dloc=(0.0, 0.0)):
    S = np.eye(2 * n_modes)
    S[2 * mode : 2 * mode + 2, 2 * mode : 2 * mode + 2] = block
    d = np.zeros(2 * n_modes)
    d[2 * mode : 2 * mode + 2] = dloc
    return S, d


def atom_rep(atom, n_modes: int) -> SymplecticRep:
    """Symplectic representation of a single Gaussian atom."""
    if isinstance(atom, Xdisp):
        S, d = _embed_single(n_modes, atom.mode, np.eye(2), (atom.s, 0.0))
    elif isinstance(atom, Zdisp):
        S, d = _embed_single(n_modes, atom.mode, np.eye(2), (0.0, atom.s))
    elif isinstance(atom, Fourier):
        S, d = _embed_single(n_modes, atom.mode, np.linalg.matrix_power(_R, atom.power))
    elif isinstance(atom, PhaseQ):
        if atom.f.c != 0.0:
            raise NonGaussianWord(f"cubic phase gate {atom} has no symplectic representation")
        # e^{i(aq + bq^2/2)} = Z(a) e^{ibq^2/2}
        S, d = _embed_single(n_modes, atom.mode, np.array([[1.0, 0.0], [atom.f.b, 1.0]]), (0.0, atom.f.a))
    elif isinstance(atom, PhaseP):
        if atom.f.c != 0.0:
            raise NonGaussianWord(f"cubic phase gate {atom} has no symplectic representation")
        # e^{i(ap + bp^2/2)} = X(-a) e^{ibp^2/2}
        S, d = _embed_single(n_modes, atom.mode, np.array([[1.0, -atom.f.b], [0.0, 1.0]]), (-atom.f.a, 0.0))
    elif isinstance(atom, Squeeze):
        S, d = _embed_single(n_modes, atom.mode, np.diag([atom.t, 1.0 / atom.t]))
    elif isinstance(atom, ControlledZ):
        S = np.eye(2 * n_modes)
        S[2 * atom.i + 1, 2 * atom.j] = atom.sign
        S[2 * atom.j + 1, 2 * atom.i] = atom.sign
        d = np.zeros(2 * n_modes)
    elif isinstance(atom, ControlledX):
        c, t = atom.control, atom.target
        S = np.eye(2 * n_modes)
        S[2 * t, 2 * c] = atom.sign  # q_t -> q_t + s q_c
        S[2 * c + 1, 2 * t + 1] = -atom.sign  # p_c -> p_c - s p_t
        d = np.zeros(2 * n_modes)
    else:
        raise TypeError(f"not a gate atom: {atom!r}")
    return SymplecticRep(S, d, 0.0)


def to_symplectic(word: GateWord) -> SymplecticRep:
    """Evaluate a Gaussian word to ``(S, d, phase)``.

    Raises :class:`NonGaussianWord` if any phase gate has a cubic term.
    """
    rep = SymplecticRep.identity(word.n_modes)
    for atom in word.atoms:
        rep = rep @ atom_rep(atom, word.n_modes)
    return rep


def quadrature_image(rep: SymplecticRep, index: int) -> tuple[np.ndarray, float]:
    """Heisenberg image ``U^dagger r_index U`` as (row of S, constant)."""
    return rep.S[index].copy(), float(rep.d[index])
