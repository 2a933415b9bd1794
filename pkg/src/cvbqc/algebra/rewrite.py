"""Byproduct frames, normal forms and equality up to byproduct.

``normalize`` pushes every displacement in a word to the far left,
``word = frame * core``.  Phase gates absorb displacements through the
feed-forward matrices (``D_q^f X(s) = e^{if(s)} X(s) D_q^{f(.+s)}``); linear
gates conjugate the frame (``F X(m) = Z(m) F`` and friends).

The core is then brought to a canonical order with a small set of local
rules (Fourier/squeeze conjugation of phase gates, F^2 past CZ/CX, merging
of like atoms, sorting of commuting neighbours).  No general BCH engine is
used: two non-Gaussian cores that the rules cannot identify are reported as
:class:`Undecidable` rather than guessed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..exceptions import Undecidable
from .params import ParamVector, apply_mm
from .symplectic import SymplecticRep, atom_rep, to_symplectic, wrap_phase
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
    format_word,
)

_ATOL = 1e-9


@dataclass(frozen=True)
class ByproductFrame:
    """Per-mode accumulated byproduct ``prod_k Z_k(eta_k) X_k(xi_k)`` with a global phase."""

    xi: tuple
    eta: tuple
    phase: float = 0.0

    def __post_init__(self):
        xi = tuple(float(x) for x in self.xi)
        eta = tuple(float(x) for x in self.eta)
        if len(xi) != len(eta):
            raise ValueError("xi and eta must have the same length")
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "eta", eta)
        object.__setattr__(self, "phase", wrap_phase(float(self.phase)))

    @classmethod
    def identity(cls, n_modes: int) -> "ByproductFrame":
        return cls((0.0,) * n_modes, (0.0,) * n_modes, 0.0)

    @classmethod
    def from_rep(cls, rep: SymplecticRep) -> "ByproductFrame":
        if not rep.is_displacement:
            raise ValueError("representation has a nontrivial linear part")
        return cls(tuple(rep.d[0::2]), tuple(rep.d[1::2]), rep.phase)

    @property
    def n_modes(self) -> int:
        return len(self.xi)

    @property
    def d(self) -> np.ndarray:
        out = np.empty(2 * self.n_modes)
        out[0::2] = self.xi
        out[1::2] = self.eta
        return out

    def to_rep(self) -> SymplecticRep:
        return SymplecticRep.displacement(self.d, self.phase)

    def compose(self, other: "ByproductFrame") -> "ByproductFrame":
        """``self * other``; additive in (xi, eta), phase from reordering."""
        return ByproductFrame.from_rep(self.to_rep() @ other.to_rep())

    def __matmul__(self, other):
        return self.compose(other)

    def to_word(self) -> GateWord:
        atoms = []
        for k, (x, e) in enumerate(zip(self.xi, self.eta)):
            if e != 0.0:
                atoms.append(Zdisp(k, e))
            if x != 0.0:
                atoms.append(Xdisp(k, x))
        return GateWord(self.n_modes, tuple(atoms))

    @property
    def is_identity(self) -> bool:
        return all(abs(x) <= _ATOL for x in self.xi + self.eta) and abs(self.phase) <= _ATOL

    def isclose(self, other: "ByproductFrame", tol: float = _ATOL, projective: bool = False) -> bool:
        return self.to_rep().allclose(other.to_rep(), tol=tol, projective=projective)


def push_byproduct_through_cz(frame_pair, sign: int = 1):
    """Rewrite ``CZ^sign (frame)`` as ``(frame') CZ^sign``.

    ``frame_pair`` is a 2-mode :class:`ByproductFrame` or a tuple of two
    single-mode frames.  Returns ``((frame0', frame1'), core)`` with the core
    the unchanged one-atom word; X(m) on one side leaves Z(sign*m) on the
    other and the reordering phase lands on ``frame0'``.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if isinstance(frame_pair, ByproductFrame):
        frame = frame_pair
    else:
        f0, f1 = frame_pair
        frame = ByproductFrame(f0.xi + f1.xi, f0.eta + f1.eta, f0.phase + f1.phase)
    if frame.n_modes != 2:
        raise ValueError("push_byproduct_through_cz needs exactly two modes")
    cz = ControlledZ(0, 1, sign)
    pushed = atom_rep(cz, 2) @ frame.to_rep()
    new = ByproductFrame.from_rep(pushed @ atom_rep(cz.inverse(), 2))
    out = (
        ByproductFrame((new.xi[0],), (new.eta[0],), new.phase),
        ByproductFrame((new.xi[1],), (new.eta[1],), 0.0),
    )
    return out, GateWord(2, (cz,))


# ---------------------------------------------------------------------------
# normalize


def _push_through_phase_gate(atom, frame: ByproductFrame):
    """``atom * frame = e^{i chi} frame * atom'`` for a single-mode phase gate."""
    k = atom.mode
    xi, eta = frame.xi[k], frame.eta[k]
    if isinstance(atom, PhaseQ):
        # Z commutes with D_q; D_q^f X(xi) = e^{if(xi)} X(xi) D_q^{f(.+xi)}
        return PhaseQ(k, apply_mm(xi, atom.f)), atom.f(xi)
    # D_p^f Z(eta) = e^{if(eta)} Z(eta) D_p^{f(.+eta)}; X commutes with D_p
    return PhaseP(k, apply_mm(eta, atom.f)), atom.f(eta)


def absorb_atom(atom, frame: ByproductFrame):
    """Rewrite ``atom * frame`` as ``frame' * core_atom``.

    Returns ``(frame', core_atom)``; ``core_atom`` is None for displacements.
    """
    n = frame.n_modes
    if isinstance(atom, (Xdisp, Zdisp)):
        return ByproductFrame.from_rep(atom_rep(atom, n)) @ frame, None
    if isinstance(atom, (PhaseQ, PhaseP)):
        new_atom, chi = _push_through_phase_gate(atom, frame)
        return ByproductFrame(frame.xi, frame.eta, frame.phase + chi), new_atom
    # linear atom: A W(d) = e^{i chi} W(S_A d) A
    lin = atom_rep(atom, n)
    return ByproductFrame.from_rep(lin @ frame.to_rep() @ lin.inverse()), atom


def normalize(word: GateWord, canonical: bool = True):
    """Split ``word`` into ``(frame, core)`` with ``word = frame * core``.

    The core contains no displacement atoms.  With ``canonical`` the core is
    also reduced by :func:`canonicalize_core`.
    """
    frame = ByproductFrame.identity(word.n_modes)
    core: list = []
    for atom in reversed(word.atoms):
        frame, core_atom = absorb_atom(atom, frame)
        if core_atom is not None:
            core.append(core_atom)
    core_word = GateWord(word.n_modes, tuple(reversed(core)))
    if canonical:
        core_word = canonicalize_core(core_word)
    return frame, core_word


# ---------------------------------------------------------------------------
# core canonicalization

_CLASS_RANK = {Fourier: 0, Squeeze: 1, PhaseQ: 2, PhaseP: 3, ControlledZ: 4, ControlledX: 5}


def _rank(atom):
    if isinstance(atom, ControlledZ):
        modes = tuple(sorted(atom.modes))
    else:
        modes = atom.modes
    return (_CLASS_RANK[type(atom)], modes)


def _q_diagonal(atom) -> bool:
    return isinstance(atom, (PhaseQ, ControlledZ))


def _commute(left, right) -> bool:
    if not set(left.modes) & set(right.modes):
        return True
    if _q_diagonal(left) and _q_diagonal(right):
        return True
    # CX = exp(-i q_c p_t): commutes with D_q on the control and D_p on the target
    for a, b in ((left, right), (right, left)):
        if isinstance(a, ControlledX) and len(b.modes) == 1:
            if isinstance(b, PhaseQ) and b.mode == a.control:
                return True
            if isinstance(b, PhaseP) and b.mode == a.target:
                return True
    return False


def _merge(left, right):
    """Product of two adjacent atoms as a tuple of atoms, or None if no rule applies."""
    if type(left) is not type(right) or left.modes != right.modes and not (
        isinstance(left, ControlledZ) and left.pair == right.pair
    ):
        return None
    if isinstance(left, Fourier):
        p = (left.power + right.power) % 4
        return () if p == 0 else (Fourier(left.mode, p),)
    if isinstance(left, PhaseQ):
        f = left.f + right.f
        return () if f.isclose(ParamVector(), atol=0.0) else (PhaseQ(left.mode, f),)
    if isinstance(left, PhaseP):
        f = left.f + right.f
        return () if f.isclose(ParamVector(), atol=0.0) else (PhaseP(left.mode, f),)
    if isinstance(left, Squeeze):
        t = left.t * right.t
        return () if abs(t - 1.0) <= 1e-12 else (Squeeze(left.mode, t),)
    if isinstance(left, (ControlledZ, ControlledX)) and left.sign == -right.sign:
        return ()
    return None


def _through_fourier(atom, power: int):
    """``atom * F^power = F^power * atom'`` for a phase gate or squeezer on the same mode."""
    for _ in range(power):
        if isinstance(atom, PhaseQ):
            # F^dagger e^{if(q)} F = e^{if(-p)}
            atom = PhaseP(atom.mode, atom.f.reflected())
        elif isinstance(atom, PhaseP):
            atom = PhaseQ(atom.mode, atom.f)
        elif isinstance(atom, Squeeze):
            atom = Squeeze(atom.mode, 1.0 / atom.t)
    return atom


def _through_squeeze(atom, t: float):
    """``atom * Q(t) = Q(t) * atom'`` for a phase gate on the same mode."""
    a, b, c = atom.f
    if isinstance(atom, PhaseQ):
        return PhaseQ(atom.mode, ParamVector(a * t, b * t**2, c * t**3))
    return PhaseP(atom.mode, ParamVector(a / t, b / t**2, c / t**3))


def _move(left, right):
    """Move a Fourier/squeeze ``right`` to the left of ``left``; None if no rule."""
    if isinstance(right, Fourier) and len(left.modes) == 1 and left.mode == right.mode:
        if isinstance(left, (PhaseQ, PhaseP, Squeeze)):
            return (right, _through_fourier(left, right.power))
    if isinstance(right, Fourier) and right.power == 2 and right.mode in left.modes:
        # F^2: (q, p) -> (-q, -p) flips the sign of the bilinear generators
        if isinstance(left, ControlledZ):
            return (right, ControlledZ(left.i, left.j, -left.sign))
        if isinstance(left, ControlledX):
            return (right, ControlledX(left.control, left.target, -left.sign))
    if isinstance(right, Squeeze) and isinstance(left, (PhaseQ, PhaseP)) and left.mode == right.mode:
        return (right, _through_squeeze(left, right.t))
    return None


def _trivial(atom) -> bool:
    if isinstance(atom, (PhaseQ, PhaseP)):
        return atom.f.is_zero
    if isinstance(atom, Squeeze):
        return abs(atom.t - 1.0) <= 1e-12
    if isinstance(atom, Fourier):
        return atom.power == 0
    return False


def canonicalize_core(core: GateWord, max_iter: int = 10_000) -> GateWord:
    """Apply local rewrite rules to a displacement-free word until nothing changes."""
    atoms = [a for a in core.atoms if not _trivial(a)]
    for _ in range(max_iter):
        changed = False
        i = 0
        while i < len(atoms) - 1:
            left, right = atoms[i], atoms[i + 1]
            merged = _merge(left, right)
            if merged is not None:
                atoms[i : i + 2] = list(merged)
                changed = True
                i = max(i - 1, 0)
                continue
            moved = _move(left, right)
            if moved is None and _commute(left, right) and _rank(left) > _rank(right):
                moved = (right, left)
            if moved is not None:
                atoms[i : i + 2] = list(moved)
                changed = True
            i += 1
        if not changed:
            break
    return GateWord(core.n_modes, tuple(atoms))


def _atoms_close(a, b, tol: float = _ATOL) -> bool:
    if type(a) is not type(b) or a.modes != b.modes:
        if isinstance(a, ControlledZ) and isinstance(b, ControlledZ):
            return a.pair == b.pair and a.sign == b.sign
        return False
    if isinstance(a, (PhaseQ, PhaseP)):
        return a.f.isclose(b.f, atol=tol)
    if isinstance(a, Squeeze):
        return abs(a.t - b.t) <= tol
    return a == b


def cores_equal(c1: GateWord, c2: GateWord, tol: float = _ATOL) -> bool:
    return len(c1) == len(c2) and all(_atoms_close(a, b, tol) for a, b in zip(c1.atoms, c2.atoms))


def word_equal_up_to_byproduct(w1: GateWord, w2: GateWord, tol: float = _ATOL):
    """Decide ``w1 = P * w2`` for a byproduct ``P``; returns ``(equal, P)``.

    Gaussian words are compared through the symplectic evaluator.  Otherwise
    the canonical cores are compared atom by atom; if both words are
    non-Gaussian and the cores differ, :class:`Undecidable` is raised.
    """
    if w1.n_modes != w2.n_modes:
        raise ValueError("words act on different numbers of modes")
    n = w1.n_modes
    if w1.is_gaussian and w2.is_gaussian:
        r1, r2 = to_symplectic(w1), to_symplectic(w2)
        if np.max(np.abs(r1.S - r2.S)) > tol:
            return False, ByproductFrame.identity(n)
        return True, ByproductFrame.from_rep(r1 @ r2.inverse())
    f1, c1 = normalize(w1)
    f2, c2 = normalize(w2)
    if cores_equal(c1, c2, tol):
        return True, f1 @ _inverse_frame(f2)
    if w1.is_gaussian != w2.is_gaussian:
        return False, ByproductFrame.identity(n)
    raise Undecidable(f"cannot decide equality of cores [{format_word(c1)}] and [{format_word(c2)}]")


def _inverse_frame(frame: ByproductFrame) -> ByproductFrame:
    return ByproductFrame.from_rep(frame.to_rep().inverse())
