"""How each node's outcome is interpreted by the client's bookkeeping.

``wire``     teleports onward along ``graph.flow`` (X on the successor, Z on its other neighbours)
``readout``  final logical outcome; optionally kicks ``Z(sign * s)`` onto ``kicks`` nodes
``leaf``     p on a leaf = q on its neighbour ``source`` (value ``sign * m``), kicking that node's neighbours
``discard``  outcome carries no information (disconnectors, already-projected hair nodes)
``output``   never measured
"""

from __future__ import annotations

from dataclasses import dataclass

from .modegraph import ModeGraph

KINDS = ("wire", "readout", "leaf", "discard", "output")


@dataclass(frozen=True)
class Role:
    kind: str
    source: int | None = None  # leaf: projected neighbour
    sign: int = 1  # leaf: edge sign to ``source``
    kicks: tuple = ()  # ((node, sign), ...): eta[node] += sign * s

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown role {self.kind!r}")


def default_roles(graph: ModeGraph) -> dict:
    roles = {}
    for n in graph.nodes:
        if n in graph.outputs:
            roles[n] = Role("output")
        elif n in graph.flow:
            roles[n] = Role("wire")
        else:
            roles[n] = Role("readout")
    return roles


def leaf_role(graph: ModeGraph, leaf: int) -> Role:
    (x, s), = graph.neighbors(leaf).items()
    kicks = tuple((y, sy) for y, sy in sorted(graph.neighbors(x).items()) if y != leaf)
    return Role("leaf", source=x, sign=s, kicks=kicks)
