"""Truncated Fock-amplitude backend.

States are complex arrays with one axis per mode (per-mode cutoffs allowed).
Gates are applied through a padded functional calculus: the generator's
quadrature (q or p) is diagonalised in a dimension ``D + pad``, the gate is
applied as a phase in that eigenbasis, and the ``D x D`` block is kept.  The
norm lost in the last step is the truncation leakage of the gate; it is
accumulated on the state and checked against a budget.

Homodyne detection of ``p + a + b q + c q^2`` is implemented as ``D_q^f``
followed by a measurement of ``p`` (the two are the same observable).  The
``p`` outcome is drawn from the exact quadrature density of the truncated
vector, ``|sum_n (-i)^n psi_n(x) c_n|^2``, and the post-measurement state is
the contraction with that Hermite vector.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy.linalg import expm
from scipy.special import gammaln

from ..algebra.params import ObservablePoly, ParamVector
from ..algebra.words import (
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
from ..exceptions import CutoffTooSmall, ShapeMismatch

DEFAULT_BUDGET = 1e-4


def pad_for(cutoff: int) -> int:
    return max(16, cutoff // 2)


@lru_cache(maxsize=64)
def quadrature_matrices(cutoff: int):
    """Truncated (q, p) in the number basis."""
    a = np.diag(np.sqrt(np.arange(1, cutoff, dtype=float)), 1)
    q = (a + a.T) / np.sqrt(2)
    p = (a - a.T) / (1j * np.sqrt(2))
    return q, p


@lru_cache(maxsize=64)
def _eigenbasis(cutoff: int, which: str):
    """Eigenvalues and the top ``cutoff`` rows of the padded q or p eigenvectors."""
    dp = cutoff + pad_for(cutoff)
    q, p = quadrature_matrices(dp)
    x, v = np.linalg.eigh(q if which == "q" else p)
    v = np.ascontiguousarray(v[:cutoff, :]).astype(complex)
    v.setflags(write=False)
    x.setflags(write=False)
    return x, v


@lru_cache(maxsize=32)
def _squeeze_matrix(cutoff: int, t: float):
    dp = cutoff + pad_for(cutoff)
    a = np.diag(np.sqrt(np.arange(1, dp, dtype=float)), 1)
    gen = 0.5 * math.log(t) * (a.T @ a.T - a @ a)
    u = expm(gen)[:cutoff, :cutoff].astype(complex)
    u.setflags(write=False)
    return u


def hermite_functions(x, n_max: int) -> np.ndarray:
    """psi_n(x) for n < n_max, shape (len(x), n_max), by the stable three-term recurrence."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.zeros((x.size, n_max))
    out[:, 0] = np.pi**-0.25 * np.exp(-0.5 * x**2)
    if n_max > 1:
        out[:, 1] = np.sqrt(2.0) * x * out[:, 0]
    for n in range(1, n_max - 1):
        out[:, n + 1] = np.sqrt(2.0 / (n + 1)) * x * out[:, n] - np.sqrt(n / (n + 1)) * out[:, n - 1]
    return out


def p_eigen_bra(x, cutoff: int) -> np.ndarray:
    """Rows <p = x| n> = (-i)^n psi_n(x)."""
    return hermite_functions(x, cutoff) * ((-1j) ** np.arange(cutoff))


def squeezed_vacuum_amplitudes(omega: float, cutoff: int) -> tuple[np.ndarray, float]:
    """Amplitudes of |0, Omega>_p and the norm missing beyond the cutoff."""
    if not omega > 0:
        raise ValueError(f"Omega must be positive, got {omega}")
    rho = math.log(omega)
    lam = -math.tanh(rho)
    amps = np.zeros(cutoff, dtype=complex)
    if lam == 0.0:
        amps[0] = 1.0
    else:
        n = np.arange((cutoff + 1) // 2)
        logmag = 0.5 * gammaln(2 * n + 1) - n * math.log(2) - gammaln(n + 1) + n * math.log(abs(lam))
        amps[0::2] = np.sign(lam) ** n * np.exp(logmag) / math.sqrt(math.cosh(rho))
    leakage = max(0.0, 1.0 - float(np.sum(np.abs(amps) ** 2)))
    return amps, leakage


def suggest_cutoff(mean, cov, sigmas: float = 12.0, floor: int = 20) -> int:
    """Cutoff covering a single-mode Gaussian state's photon distribution."""
    mean, cov = np.asarray(mean, float), np.asarray(cov, float)
    nbar = (np.trace(cov) - 1.0) / 2.0 + mean @ mean / 2.0
    var_n = np.trace(cov @ cov) / 2.0 - 0.25 + mean @ cov @ mean
    return int(math.ceil(nbar + sigmas * math.sqrt(max(var_n, 0.0)) + floor))


class FockState:
    """Pure state on truncated Fock spaces; ``amps.shape`` is the per-mode cutoffs."""

    def __init__(self, amps, leakage: float = 0.0, budget: float = DEFAULT_BUDGET):
        self.amps = np.asarray(amps, dtype=complex)
        self.leakage = float(leakage)
        self.budget = float(budget)

    # --- construction -------------------------------------------------------

    @classmethod
    def vacuum(cls, cutoffs, budget: float = DEFAULT_BUDGET) -> "FockState":
        cutoffs = tuple(np.atleast_1d(cutoffs).tolist())
        amps = np.zeros(cutoffs, dtype=complex)
        amps[(0,) * len(cutoffs)] = 1.0
        return cls(amps, 0.0, budget)

    @classmethod
    def squeezed_vacuum(cls, omega: float, cutoff: int, budget: float = DEFAULT_BUDGET) -> "FockState":
        amps, leak = squeezed_vacuum_amplitudes(omega, cutoff)
        if leak > budget:
            raise CutoffTooSmall(f"cutoff {cutoff} loses {leak:.2e} of |0,{omega}>_p (budget {budget:.0e})")
        return cls(amps / np.linalg.norm(amps), leak, budget)

    @classmethod
    def from_vector(cls, vec, budget: float = DEFAULT_BUDGET) -> "FockState":
        vec = np.asarray(vec, dtype=complex)
        return cls(vec / np.linalg.norm(vec), 0.0, budget)

    def copy(self) -> "FockState":
        return FockState(self.amps.copy(), self.leakage, self.budget)

    @property
    def n_modes(self) -> int:
        return self.amps.ndim

    @property
    def cutoffs(self) -> tuple:
        return self.amps.shape

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def tensor(self, other: "FockState") -> "FockState":
        return FockState(np.multiply.outer(self.amps, other.amps), self.leakage + other.leakage, self.budget)

    # --- gates --------------------------------------------------------------

    def _finish(self, new_amps, what: str) -> "FockState":
        before = float(np.vdot(self.amps, self.amps).real)
        after = float(np.vdot(new_amps, new_amps).real)
        leak = max(0.0, 1.0 - after / before)
        if leak > self.budget:
            raise CutoffTooSmall(f"{what} leaked {leak:.2e} of the norm at cutoffs {self.cutoffs} (budget {self.budget:.0e})")
        return FockState(new_amps / math.sqrt(after), self.leakage + leak, self.budget)

    def _diagonal(self, modes, which, phase):
        """Apply ``phase(x_1, ..., x_k)`` in the padded eigenbases ``which[k]`` of ``modes``."""
        psi = self.amps
        bases = []
        for mode, w in zip(modes, which):
            x, v = _eigenbasis(self.cutoffs[mode], w)
            bases.append((x, v))
            psi = _contract(v.conj().T, psi, mode)
        grids = np.meshgrid(*(x for x, _ in bases), indexing="ij")
        ph = phase(*grids)
        shape = [1] * psi.ndim
        for mode, (x, _) in zip(modes, bases):
            shape[mode] = x.size
        order = np.argsort(modes)
        ph = np.transpose(ph, order).reshape(shape)
        psi = psi * ph
        for mode, (_, v) in zip(modes, bases):
            psi = _contract(v, psi, mode)
        return psi

    def apply_atom(self, atom) -> "FockState":
        if isinstance(atom, Fourier):
            d = self.cutoffs[atom.mode]
            diag = (1j ** (atom.power * np.arange(d))).astype(complex)
            shape = [1] * self.n_modes
            shape[atom.mode] = d
            return FockState(self.amps * diag.reshape(shape), self.leakage, self.budget)
        if isinstance(atom, Xdisp):
            new = self._diagonal([atom.mode], "p", lambda x: np.exp(-1j * atom.s * x))
        elif isinstance(atom, Zdisp):
            new = self._diagonal([atom.mode], "q", lambda x: np.exp(1j * atom.s * x))
        elif isinstance(atom, PhaseQ):
            new = self._diagonal([atom.mode], "q", lambda x: np.exp(1j * atom.f(x)))
        elif isinstance(atom, PhaseP):
            new = self._diagonal([atom.mode], "p", lambda x: np.exp(1j * atom.f(x)))
        elif isinstance(atom, Squeeze):
            new = _contract(_squeeze_matrix(self.cutoffs[atom.mode], float(atom.t)), self.amps, atom.mode)
        elif isinstance(atom, ControlledZ):
            new = self._diagonal([atom.i, atom.j], "qq", lambda x, y: np.exp(1j * atom.sign * x * y))
        elif isinstance(atom, ControlledX):
            new = self._diagonal([atom.control, atom.target], "qp", lambda x, y: np.exp(-1j * atom.sign * x * y))
        else:
            raise TypeError(f"not a gate atom: {atom!r}")
        return self._finish(new, str(atom))

    def apply_word(self, word: GateWord) -> "FockState":
        if word.n_modes != self.n_modes:
            raise ShapeMismatch(f"word on {word.n_modes} modes applied to {self.n_modes}-mode state")
        state = self
        for atom in word.applied_order():
            state = state.apply_atom(atom)
        return state

    def apply_phase(self, mode: int, f: ParamVector) -> "FockState":
        if f.is_zero:
            return self
        return self.apply_atom(PhaseQ(mode, f))

    # --- homodyne -----------------------------------------------------------

    def _rotate_for(self, mode: int, observable: ObservablePoly) -> "FockState":
        # measuring p + a + b q + c q^2 == applying D_q^f then measuring p
        return self.apply_phase(mode, observable.coeffs)

    def _p_amplitudes(self, mode: int, x) -> np.ndarray:
        bra = p_eigen_bra(x, self.cutoffs[mode])  # (len(x), D)
        return _contract(bra, self.amps, mode)  # measured axis now indexes x

    def outcome_density(self, mode: int, x, observable: ObservablePoly = ObservablePoly()) -> np.ndarray:
        st = self._rotate_for(mode, observable)
        amp = np.moveaxis(st._p_amplitudes(mode, x), mode, 0)
        return np.sum(np.abs(amp.reshape(amp.shape[0], -1)) ** 2, axis=1)

    def _grid(self, mode: int):
        d = self.cutoffs[mode]
        half = math.sqrt(2 * d + 1) + 6.0
        return np.linspace(-half, half, max(4001, 8 * d + 1))

    def project(self, mode: int, value: float, observable: ObservablePoly = ObservablePoly()):
        """Condition on outcome ``value``; returns ``(post_state, density)``.

        ``post_state`` is None when the measured mode was the last one.
        """
        st = self._rotate_for(mode, observable)
        amp = st._p_amplitudes(mode, np.array([float(value)]))
        post = np.take(amp, 0, axis=mode)
        density = float(np.vdot(post, post).real)
        if self.n_modes == 1:
            return None, density
        if density <= 0.0:
            raise ValueError(f"outcome {value} has zero probability density")
        return FockState(post / math.sqrt(density), st.leakage, st.budget), density

    def homodyne(self, mode: int, observable: ObservablePoly = ObservablePoly(), rng=None):
        """Sample a homodyne outcome; returns ``(value, post_state)``."""
        rng = np.random.default_rng() if rng is None else rng
        st = self._rotate_for(mode, observable)
        grid = st._grid(mode)
        dens = st.outcome_density(mode, grid)
        value = _sample_from_grid(grid, dens, rng)
        post, _ = st.project(mode, value)
        return value, post

    def sample_outcomes(self, mode: int, n: int, observable: ObservablePoly = ObservablePoly(), rng=None) -> np.ndarray:
        """``n`` independent outcomes from the same pre-measurement state (no post-states)."""
        rng = np.random.default_rng() if rng is None else rng
        st = self._rotate_for(mode, observable)
        grid = st._grid(mode)
        dens = st.outcome_density(mode, grid)
        return _sample_from_grid(grid, dens, rng, size=n)

    # --- diagnostics --------------------------------------------------------

    def reduced_density(self, keep) -> np.ndarray:
        keep = sorted(int(k) for k in np.atleast_1d(keep))
        if not keep:
            raise ValueError("keep must name at least one mode")
        traced = [k for k in range(self.n_modes) if k not in keep]
        psi = np.transpose(self.amps, keep + traced)
        dk = int(np.prod([self.cutoffs[k] for k in keep]))
        psi = psi.reshape(dk, -1)
        rho = psi @ psi.conj().T
        return rho / np.trace(rho).real

    def quadrature_moments(self):
        """Mean vector and symmetrised covariance of (q1, p1, ...) from the truncated operators."""
        ops = []
        for k, d in enumerate(self.cutoffs):
            q, p = quadrature_matrices(d)
            ops.extend([(k, q), (k, p)])
        vecs = [_contract(op, self.amps, k) for k, op in ops]
        psi = self.amps.reshape(-1)
        flat = [v.reshape(-1) for v in vecs]
        mean = np.array([np.vdot(psi, v).real for v in flat])
        gram = np.array([[np.vdot(a, b).real for b in flat] for a in flat])
        return mean, gram - np.outer(mean, mean)

    def photon_tail(self, mode: int, last: int = 5) -> float:
        """Probability in the top ``last`` Fock levels of ``mode`` (a truncation diagnostic)."""
        probs = np.sum(np.abs(np.moveaxis(self.amps, mode, 0)) ** 2, axis=tuple(range(1, self.n_modes)))
        return float(np.sum(probs[-last:]))


def q_phase_family(amps, phases) -> tuple[np.ndarray, float]:
    """Apply a family of q-diagonal gates to one single-mode state in a single pass.

    ``phases(x)`` returns an array ``(len(x), n)`` of phases ``f_i(x)``; the
    result has shape ``(n, D)`` with row ``i`` the normalised
    ``e^{i f_i(q)} |amps>``.  Also returns the largest truncation leakage.
    """
    amps = np.asarray(amps, dtype=complex)
    x, v = _eigenbasis(amps.size, "q")
    coef = v.conj().T @ amps
    out = (v @ (coef[:, None] * np.exp(1j * phases(x)))).T
    norms = np.linalg.norm(out, axis=1)
    leak = float(np.max(1.0 - norms**2 / float(np.vdot(amps, amps).real)))
    return out / norms[:, None], max(leak, 0.0)


def _contract(mat: np.ndarray, psi: np.ndarray, axis: int) -> np.ndarray:
    """Apply ``mat`` (new x old) to axis ``axis`` of ``psi``."""
    return np.moveaxis(np.tensordot(mat, psi, axes=([1], [axis])), 0, axis)


def _sample_from_grid(grid, dens, rng, size=None):
    """Inverse-CDF sampling of a density tabulated on a fine grid."""
    cdf = np.concatenate([[0.0], np.cumsum(0.5 * (dens[1:] + dens[:-1]) * np.diff(grid))])
    u = rng.uniform(0.0, cdf[-1], size=size)
    out = np.interp(u, cdf, grid)
    return float(out) if size is None else out


def gauss_legendre_window(eps: float, order: int = 24):
    nodes, weights = np.polynomial.legendre.leggauss(order)
    return eps * nodes, eps * weights


def postselect_average(state: FockState, mode: int, eps: float, fn, observable=ObservablePoly(), order: int = 24):
    """Density-weighted average of ``fn(post_state, value)`` over outcomes in [-eps, eps].

    Returns ``(acceptance_probability, average)``.
    """
    xs, ws = gauss_legendre_window(eps, order)
    vals, dens = [], []
    for x in xs:
        post, d = state.project(mode, x, observable)
        vals.append(fn(post, x))
        dens.append(d)
    dens = np.asarray(dens) * ws
    acc = float(np.sum(dens))
    return acc, float(np.sum(dens * np.asarray(vals)) / acc)
