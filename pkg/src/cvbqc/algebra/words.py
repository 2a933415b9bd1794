"""Gate atoms, gate words, and their textual syntax.

A :class:`GateWord` stores atoms in operator-product order: the first atom is
the leftmost factor and is applied last.  The text form uses the same order,
e.g. ``"CZd@0,1 F@0 Dq(1,0,0)@0"`` is ``CZ^dagger F D_q``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .params import ParamVector


@dataclass(frozen=True)
class Xdisp:
    """X(s) = exp(-i s p)."""

    mode: int
    s: float

    @property
    def modes(self):
        return (self.mode,)

    def inverse(self):
        return Xdisp(self.mode, -self.s)

    def relabel(self, mapping):
        return Xdisp(mapping[self.mode], self.s)


@dataclass(frozen=True)
class Zdisp:
    """Z(s) = exp(i s q)."""

    mode: int
    s: float

    @property
    def modes(self):
        return (self.mode,)

    def inverse(self):
        return Zdisp(self.mode, -self.s)

    def relabel(self, mapping):
        return Zdisp(mapping[self.mode], self.s)


@dataclass(frozen=True)
class Fourier:
    """F**power with F = exp(i pi n / 2), so F^4 = I exactly."""

    mode: int
    power: int = 1

    def __post_init__(self):
        object.__setattr__(self, "power", int(self.power) % 4)

    @property
    def modes(self):
        return (self.mode,)

    def inverse(self):
        return Fourier(self.mode, -self.power)

    def relabel(self, mapping):
        return Fourier(mapping[self.mode], self.power)


@dataclass(frozen=True)
class PhaseQ:
    """D_q^f = exp(i f(q))."""

    mode: int
    f: ParamVector

    @property
    def modes(self):
        return (self.mode,)

    def inverse(self):
        return PhaseQ(self.mode, -self.f)

    def relabel(self, mapping):
        return PhaseQ(mapping[self.mode], self.f)


@dataclass(frozen=True)
class PhaseP:
    """D_p^f = exp(i f(p))."""

    mode: int
    f: ParamVector

    @property
    def modes(self):
        return (self.mode,)

    def inverse(self):
        return PhaseP(self.mode, -self.f)

    def relabel(self, mapping):
        return PhaseP(mapping[self.mode], self.f)


@dataclass(frozen=True)
class Squeeze:
    """Q(t) = exp(-i ln(t) (qp + pq) / 2); acts as q -> t q, p -> p / t."""

    mode: int
    t: float

    def __post_init__(self):
        if not self.t > 0:
            raise ValueError(f"squeezing factor must be positive, got {self.t}")

    @property
    def modes(self):
        return (self.mode,)

    def inverse(self):
        return Squeeze(self.mode, 1.0 / self.t)

    def relabel(self, mapping):
        return Squeeze(mapping[self.mode], self.t)


@dataclass(frozen=True)
class ControlledZ:
    """exp(i sign q_i q_j); sign -1 is CZ^dagger."""

    i: int
    j: int
    sign: int = 1

    def __post_init__(self):
        if self.i == self.j:
            raise ValueError("ControlledZ needs two distinct modes")
        if self.sign not in (1, -1):
            raise ValueError("ControlledZ sign must be +1 or -1")

    @property
    def modes(self):
        return (self.i, self.j)

    @property
    def pair(self):
        return frozenset((self.i, self.j))

    def inverse(self):
        return ControlledZ(self.i, self.j, -self.sign)

    def relabel(self, mapping):
        return ControlledZ(mapping[self.i], mapping[self.j], self.sign)


@dataclass(frozen=True)
class ControlledX:
    """exp(-i sign q_control p_target); sign -1 is CX^dagger."""

    control: int
    target: int
    sign: int = 1

    def __post_init__(self):
        if self.control == self.target:
            raise ValueError("ControlledX needs two distinct modes")
        if self.sign not in (1, -1):
            raise ValueError("ControlledX sign must be +1 or -1")

    @property
    def modes(self):
        return (self.control, self.target)

    def inverse(self):
        return ControlledX(self.control, self.target, -self.sign)

    def relabel(self, mapping):
        return ControlledX(mapping[self.control], mapping[self.target], self.sign)


GateAtom = Union[Xdisp, Zdisp, Fourier, PhaseQ, PhaseP, Squeeze, ControlledZ, ControlledX]

DISPLACEMENTS = (Xdisp, Zdisp)


def is_gaussian_atom(atom) -> bool:
    if isinstance(atom, (PhaseQ, PhaseP)):
        return atom.f.c == 0.0
    return True


@dataclass(frozen=True)
class GateWord:
    n_modes: int
    atoms: tuple = ()

    def __post_init__(self):
        if self.n_modes < 1:
            raise ValueError("a word acts on at least one mode")
        object.__setattr__(self, "atoms", tuple(self.atoms))
        for atom in self.atoms:
            for m in atom.modes:
                if not 0 <= m < self.n_modes:
                    raise ValueError(f"{atom} acts on mode {m} outside 0..{self.n_modes - 1}")

    def __len__(self):
        return len(self.atoms)

    def __iter__(self):
        return iter(self.atoms)

    def __mul__(self, other: "GateWord") -> "GateWord":
        """Operator product: ``(w1 * w2)`` applies ``w2`` first."""
        if self.n_modes != other.n_modes:
            raise ValueError("cannot multiply words on different mode counts")
        return GateWord(self.n_modes, self.atoms + other.atoms)

    @property
    def is_gaussian(self) -> bool:
        return all(is_gaussian_atom(a) for a in self.atoms)

    def inverse(self) -> "GateWord":
        return GateWord(self.n_modes, tuple(a.inverse() for a in reversed(self.atoms)))

    def embed(self, n_modes: int, mapping=None) -> "GateWord":
        """Relabel modes (``mapping[old] = new``) into a word on ``n_modes``."""
        if mapping is None:
            mapping = {k: k for k in range(self.n_modes)}
        return GateWord(n_modes, tuple(a.relabel(mapping) for a in self.atoms))

    def applied_order(self):
        """Atoms in the order they act on a state (rightmost first)."""
        return tuple(reversed(self.atoms))

    def __str__(self):
        return format_word(self)

    @classmethod
    def parse(cls, text: str, n_modes: int | None = None) -> "GateWord":
        return parse_word(text, n_modes)


def word(n_modes: int, *atoms) -> GateWord:
    return GateWord(n_modes, atoms)


# ---------------------------------------------------------------------------
# text syntax

_NUM = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"
_TOKEN = re.compile(
    rf"""^(?:
      (?P<disp>[XZ])\((?P<s>{_NUM})\)@(?P<dmode>\d+)
    | F(?:\^(?P<fpow>\d+))?@(?P<fmode>\d+)
    | (?P<phase>Dq|Dp|Sq)\((?P<pa>{_NUM}),(?P<pb>{_NUM}),(?P<pc>{_NUM})\)@(?P<pmode>\d+)
    | Q\((?P<t>{_NUM})\)@(?P<qmode>\d+)
    | (?P<two>CZd|CZ|CXd|CX)@(?P<m1>\d+),(?P<m2>\d+)
    )$""",
    re.VERBOSE,
)


def parse_atom(token: str):
    m = _TOKEN.match(token.replace(" ", ""))
    if m is None:
        raise ValueError(f"cannot parse gate atom {token!r}")
    g = m.groupdict()
    if g["disp"]:
        cls = Xdisp if g["disp"] == "X" else Zdisp
        return cls(int(g["dmode"]), float(g["s"]))
    if g["fmode"] is not None:
        return Fourier(int(g["fmode"]), int(g["fpow"] or 1))
    if g["phase"]:
        f = ParamVector(float(g["pa"]), float(g["pb"]), float(g["pc"]))
        mode = int(g["pmode"])
        # Sq(v) = F^dagger R_q(v) = D_q^{f_v}
        return PhaseP(mode, f) if g["phase"] == "Dp" else PhaseQ(mode, f)
    if g["qmode"] is not None:
        return Squeeze(int(g["qmode"]), float(g["t"]))
    i, j = int(g["m1"]), int(g["m2"])
    two = g["two"]
    if two.startswith("CZ"):
        return ControlledZ(i, j, -1 if two == "CZd" else 1)
    return ControlledX(i, j, -1 if two == "CXd" else 1)


def parse_word(text: str, n_modes: int | None = None) -> GateWord:
    # commas inside parentheses must not split tokens; whitespace separates atoms
    tokens = re.sub(r"\(\s*([^)]*?)\s*\)", lambda m: "(" + m.group(1).replace(" ", "") + ")", text).split()
    atoms = tuple(parse_atom(t) for t in tokens)
    if n_modes is None:
        n_modes = max((max(a.modes) for a in atoms), default=0) + 1
    return GateWord(n_modes, atoms)


def _fmt(x: float) -> str:
    return repr(float(x))


def format_atom(atom) -> str:
    if isinstance(atom, Xdisp):
        return f"X({_fmt(atom.s)})@{atom.mode}"
    if isinstance(atom, Zdisp):
        return f"Z({_fmt(atom.s)})@{atom.mode}"
    if isinstance(atom, Fourier):
        return f"F@{atom.mode}" if atom.power == 1 else f"F^{atom.power}@{atom.mode}"
    if isinstance(atom, (PhaseQ, PhaseP)):
        name = "Dq" if isinstance(atom, PhaseQ) else "Dp"
        return f"{name}({_fmt(atom.f.a)},{_fmt(atom.f.b)},{_fmt(atom.f.c)})@{atom.mode}"
    if isinstance(atom, Squeeze):
        return f"Q({_fmt(atom.t)})@{atom.mode}"
    if isinstance(atom, ControlledZ):
        return f"{'CZ' if atom.sign == 1 else 'CZd'}@{atom.i},{atom.j}"
    if isinstance(atom, ControlledX):
        return f"{'CX' if atom.sign == 1 else 'CXd'}@{atom.control},{atom.target}"
    raise TypeError(f"not a gate atom: {atom!r}")


def format_word(w: GateWord) -> str:
    return " ".join(format_atom(a) for a in w.atoms)
