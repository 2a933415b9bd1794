"""Covariance-matrix backend for Gaussian states.

Conventions: quadratures ordered (q1, p1, ..., qN, pN), [q, p] = i, vacuum
covariance I/2.  ``cov`` is the symmetrised covariance
``<{dr_i, dr_j}>/2``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..algebra.params import ObservablePoly
from ..algebra.symplectic import SymplecticRep, symplectic_form, to_symplectic
from ..algebra.words import GateWord
from ..exceptions import ShapeMismatch, UnsupportedObservable


@dataclass(frozen=True)
class GaussianState:
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=float).reshape(-1)
        cov = np.asarray(self.cov, dtype=float)
        if cov.shape != (mean.size, mean.size) or mean.size % 2:
            raise ShapeMismatch(f"mean {mean.shape} and cov {cov.shape} do not describe a set of modes")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", 0.5 * (cov + cov.T))

    @property
    def n_modes(self) -> int:
        return self.mean.size // 2

    @classmethod
    def vacuum(cls, n_modes: int = 1) -> "GaussianState":
        return cls(np.zeros(2 * n_modes), 0.5 * np.eye(2 * n_modes))

    @classmethod
    def squeezed_vacuum(cls, omega: float, n_modes: int = 1) -> "GaussianState":
        """|0, Omega>_p on each mode: Var(q) = 1/(2 Omega^2), Var(p) = Omega^2/2."""
        if not omega > 0:
            raise ValueError(f"Omega must be positive, got {omega}")
        block = np.diag([0.5 / omega**2, 0.5 * omega**2])
        return cls(np.zeros(2 * n_modes), np.kron(np.eye(n_modes), block))

    @classmethod
    def q_squeezed(cls, omega_q: float, s: float = 0.0) -> "GaussianState":
        """Approximate q eigenstate |s>_q with Var(q) = omega_q^2 / 2."""
        return cls(np.array([s, 0.0]), np.diag([0.5 * omega_q**2, 0.5 / omega_q**2]))

    # --- structure ----------------------------------------------------------

    def tensor(self, other: "GaussianState") -> "GaussianState":
        n1 = self.mean.size
        cov = np.zeros((n1 + other.mean.size,) * 2)
        cov[:n1, :n1] = self.cov
        cov[n1:, n1:] = other.cov
        return GaussianState(np.concatenate([self.mean, other.mean]), cov)

    def reduced(self, keep) -> "GaussianState":
        idx = _quad_indices(keep)
        return GaussianState(self.mean[idx], self.cov[np.ix_(idx, idx)])

    def symplectic_eigenvalues(self) -> np.ndarray:
        omega = symplectic_form(self.n_modes)
        ev = np.abs(np.linalg.eigvals(1j * omega @ self.cov))
        return np.sort(ev)[::2]

    def is_physical(self, tol: float = 1e-9) -> bool:
        return bool(np.all(self.symplectic_eigenvalues() >= 0.5 - tol))

    def purity(self) -> float:
        return float(1.0 / np.sqrt(np.linalg.det(2.0 * self.cov)))

    def entropy(self) -> float:
        """von Neumann entropy in nats."""
        return float(sum(_g(nu) for nu in self.symplectic_eigenvalues()))

    # --- evolution ----------------------------------------------------------

    def apply_rep(self, rep: SymplecticRep) -> "GaussianState":
        if rep.S.shape[0] != self.mean.size:
            raise ShapeMismatch("representation and state act on different mode counts")
        return GaussianState(rep.S @ self.mean + rep.d, rep.S @ self.cov @ rep.S.T)

    def apply_word(self, word: GateWord) -> "GaussianState":
        if word.n_modes != self.n_modes:
            raise ShapeMismatch(f"word on {word.n_modes} modes applied to {self.n_modes}-mode state")
        return self.apply_rep(to_symplectic(word))

    # --- measurement --------------------------------------------------------

    def _readout(self, mode: int, observable: ObservablePoly):
        if not observable.is_linear:
            raise UnsupportedObservable(f"observable {observable} is not linear in the quadratures")
        ell = np.zeros(self.mean.size)
        ell[2 * mode + 1] = 1.0
        ell[2 * mode] = observable.b
        return ell, float(ell @ self.mean + observable.a), float(ell @ self.cov @ ell)

    def outcome_distribution(self, mode: int, observable: ObservablePoly = ObservablePoly()):
        """Mean and variance of the homodyne outcome."""
        _, mu, var = self._readout(mode, observable)
        return mu, var

    def project(self, mode: int, value: float, observable: ObservablePoly = ObservablePoly()):
        """Condition on outcome ``value``; the measured mode is removed.

        Returns ``(post_state, density)`` where ``density`` is the outcome pdf at ``value``.
        """
        ell, mu, var = self._readout(mode, observable)
        rest = [k for k in range(self.n_modes) if k != mode]
        idx = _quad_indices(rest)
        gain = self.cov[idx] @ ell / var
        mean = self.mean[idx] + gain * (value - mu)
        cov = self.cov[np.ix_(idx, idx)] - np.outer(gain, gain) * var
        density = float(np.exp(-0.5 * (value - mu) ** 2 / var) / np.sqrt(2 * np.pi * var))
        post = GaussianState(mean, cov) if rest else None
        return post, density

    def homodyne(self, mode: int, observable: ObservablePoly = ObservablePoly(), rng=None):
        """Sample an outcome; returns ``(value, post_state)``."""
        rng = np.random.default_rng() if rng is None else rng
        _, mu, var = self._readout(mode, observable)
        value = float(rng.normal(mu, np.sqrt(var)))
        post, _ = self.project(mode, value, observable)
        return value, post

    # --- comparisons --------------------------------------------------------

    def overlap(self, other: "GaussianState") -> float:
        """Tr(rho1 rho2); equals the fidelity when either state is pure."""
        if other.mean.size != self.mean.size:
            raise ShapeMismatch("states have different mode counts")
        vsum = self.cov + other.cov
        delta = self.mean - other.mean
        return float(np.exp(-0.5 * delta @ np.linalg.solve(vsum, delta)) / np.sqrt(np.linalg.det(vsum)))

    def mutual_information(self, a, b) -> float:
        a, b = list(np.atleast_1d(a)), list(np.atleast_1d(b))
        return self.reduced(a).entropy() + self.reduced(b).entropy() - self.reduced(a + b).entropy()


def _quad_indices(modes) -> list:
    return [i for k in np.atleast_1d(modes) for i in (2 * int(k), 2 * int(k) + 1)]


def _g(nu: float) -> float:
    if nu <= 0.5 + 1e-12:
        return 0.0
    return (nu + 0.5) * np.log(nu + 0.5) - (nu - 0.5) * np.log(nu - 0.5)
