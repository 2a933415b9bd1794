"""CV brickwork layout.

Each wire ``w`` is a chain of nodes ``(w, 0) ... (w, n_columns)``; column 0
holds the inputs, the last column the outputs.  A brick on wires
``(w, w+1)`` starting at column ``c0`` spans four measured columns: a CZ
joins the wires at column ``c0 + 2`` and a CZ^dagger at column ``c0 + 4``
(the operator word ``CZ^dagger (PF PF (x) PF PF) CZ (PF PF (x) PF PF)``).
Layers alternate between even and odd wire pairs as in the qubit brickwork.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..algebra.identities import brick_params, brick_target, brick_word
from ..algebra.params import ParamVector
from .modegraph import ModeGraph

ZERO = ParamVector()
KINDS = ("sq", "sp", "cx")


@dataclass
class BrickworkLayout:
    n_wires: int
    n_columns: int
    params: dict = field(default_factory=dict)  # node id -> ParamVector (missing = placeholder / zero)

    def __post_init__(self):
        if self.n_wires < 1:
            raise ValueError("need at least one wire")
        if self.n_columns < 4 or self.n_columns % 4:
            raise ValueError(f"n_columns must be a positive multiple of 4, got {self.n_columns}")

    @property
    def n_layers(self) -> int:
        return self.n_columns // 4

    def node(self, wire: int, col: int) -> int:
        if not (0 <= wire < self.n_wires and 0 <= col <= self.n_columns):
            raise IndexError(f"no node at wire {wire}, column {col}")
        return wire * (self.n_columns + 1) + col

    def position(self, node: int) -> tuple:
        return divmod(node, self.n_columns + 1)

    def bricks(self) -> list:
        """(top wire, start column) of every brick, layer by layer."""
        out = []
        for layer in range(self.n_layers):
            for top in range(layer % 2, self.n_wires - 1, 2):
                out.append((top, 4 * layer))
        return out

    def graph(self) -> ModeGraph:
        cols = self.n_columns
        nodes = [self.node(w, c) for w in range(self.n_wires) for c in range(cols + 1)]
        edges = {}
        for w in range(self.n_wires):
            for c in range(cols):
                edges[(self.node(w, c), self.node(w, c + 1))] = 1
        for top, c0 in self.bricks():
            edges[(self.node(top, c0 + 2), self.node(top + 1, c0 + 2))] = 1
            edges[(self.node(top, c0 + 4), self.node(top + 1, c0 + 4))] = -1
        order = [self.node(w, c) for c in range(cols) for w in range(self.n_wires)]  # column-major
        return ModeGraph(
            nodes=nodes,
            edges=edges,
            inputs=[self.node(w, 0) for w in range(self.n_wires)],
            outputs=[self.node(w, cols) for w in range(self.n_wires)],
            order=order,
            flow={self.node(w, c): self.node(w, c + 1) for w in range(self.n_wires) for c in range(cols)},
        )

    def assign(self, brick_index: int, pattern: "BrickPattern") -> None:
        """Write a brick pattern's logical slot parameters into the layout."""
        top, c0 = self.bricks()[brick_index]
        for k in range(4):
            self.params[self.node(top, c0 + k)] = pattern.top[k]
            self.params[self.node(top + 1, c0 + k)] = pattern.bottom[k]

    def program(self) -> dict:
        """Logical parameter of every measured node (placeholders become zero)."""
        g = self.graph()
        return {n: self.params.get(n, ZERO) for n in g.order}


@dataclass(frozen=True)
class BrickPattern:
    """Logical slot parameters of one brick, in application order per wire.

    Slot values are the ideal (byproduct-free) parameters; the executed value
    at run time is the feed-forward corrected ``M_xi^{-1}(phi - eta e)``.
    """

    kind: str
    v: ParamVector
    top: tuple
    bottom: tuple

    def target(self):
        return brick_target(self.kind, self.v)

    def word(self, outcomes=None, incoming=None):
        """Brick operator word with byproducts and live feed-forward."""
        return brick_word(self.top, self.bottom, outcomes, incoming)


def brick_pattern(kind: str, v: ParamVector | None = None) -> BrickPattern:
    """Parameter assignment for S_q(v) (x) I ('sq'), S_p(v) (x) I ('sp') or CX ('cx')."""
    if kind not in KINDS:
        raise ValueError(f"unknown brick target {kind!r}; expected one of {KINDS}")
    v = ZERO if v is None else v
    top, bottom = brick_params(kind, v)
    return BrickPattern(kind, v, tuple(top), tuple(bottom))


def single_brick_layout(kind: str = "sq", v: ParamVector | None = None) -> BrickworkLayout:
    layout = BrickworkLayout(2, 4)
    layout.assign(0, brick_pattern(kind, v))
    return layout
