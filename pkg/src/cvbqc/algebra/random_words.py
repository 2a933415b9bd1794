"""Random gate words for property tests and the identity suite."""

from __future__ import annotations

from .params import ParamVector
from .words import ControlledX, ControlledZ, Fourier, GateWord, PhaseP, PhaseQ, Squeeze, Xdisp, Zdisp

_SINGLE = ("X", "Z", "F", "Dq", "Dp", "Q")


def random_atom(rng, n_modes: int, cubic: bool = False, scale: float = 1.0):
    kinds = _SINGLE + (("CZ", "CX") if n_modes > 1 else ())
    kind = kinds[rng.integers(len(kinds))]
    k = int(rng.integers(n_modes))
    if kind == "X":
        return Xdisp(k, rng.uniform(-2, 2) * scale)
    if kind == "Z":
        return Zdisp(k, rng.uniform(-2, 2) * scale)
    if kind == "F":
        return Fourier(k, int(rng.integers(1, 4)))
    if kind in ("Dq", "Dp"):
        a, b, c = rng.uniform(-1, 1, size=3) * scale
        f = ParamVector(a, b, c if cubic else 0.0)
        return PhaseQ(k, f) if kind == "Dq" else PhaseP(k, f)
    if kind == "Q":
        return Squeeze(k, float(rng.uniform(0.5, 2.0)))
    i, j = rng.choice(n_modes, size=2, replace=False)
    sign = int(rng.choice([-1, 1]))
    return ControlledZ(int(i), int(j), sign) if kind == "CZ" else ControlledX(int(i), int(j), sign)


def random_gaussian_word(rng, n_modes: int = 2, length: int = 8, scale: float = 1.0) -> GateWord:
    return GateWord(n_modes, tuple(random_atom(rng, n_modes, False, scale) for _ in range(length)))


def random_word(rng, n_modes: int = 2, length: int = 8, scale: float = 1.0) -> GateWord:
    return GateWord(n_modes, tuple(random_atom(rng, n_modes, True, scale) for _ in range(length)))
