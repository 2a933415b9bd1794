"""Graph description of a CV cluster resource.

Nodes are integer qumode ids.  Edges carry a sign: +1 for CZ = exp(i q q),
-1 for CZ^dagger.  ``flow`` maps each measured node that teleports its
logical state onward to its successor; the byproduct of measuring ``k`` is
X on ``flow[k]`` and Z on the other neighbours of ``flow[k]``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..exceptions import CycleError


def _key(i: int, j: int) -> tuple:
    return (i, j) if i < j else (j, i)


@dataclass
class ModeGraph:
    nodes: list = field(default_factory=list)
    edges: dict = field(default_factory=dict)  # (i, j) with i < j -> sign
    inputs: list = field(default_factory=list)
    outputs: list = field(default_factory=list)
    order: list = field(default_factory=list)  # measurement order over non-output nodes
    flow: dict = field(default_factory=dict)  # measured node -> successor

    def __post_init__(self):
        self.nodes = [int(n) for n in self.nodes]
        if len(set(self.nodes)) != len(self.nodes):
            raise ValueError("duplicate node ids")
        edges = {}
        items = self.edges.items() if isinstance(self.edges, dict) else [((e[0], e[1]), e[2] if len(e) > 2 else 1) for e in self.edges]
        for (i, j), s in items:
            i, j, s = int(i), int(j), int(s)
            if i == j:
                raise ValueError(f"self-loop on node {i}")
            if s not in (1, -1):
                raise ValueError(f"edge sign must be +1 or -1, got {s}")
            k = _key(i, j)
            if k in edges:
                raise ValueError(f"duplicate edge {k}")
            edges[k] = s
        self.edges = edges
        self.inputs = [int(n) for n in self.inputs]
        self.outputs = [int(n) for n in self.outputs]
        self.flow = {int(k): int(v) for k, v in self.flow.items()}
        if not self.order:
            self.order = [n for n in self.nodes if n not in set(self.outputs)]
        self.order = [int(n) for n in self.order]
        self.validate()

    # --- structure ----------------------------------------------------------

    def validate(self) -> None:
        known = set(self.nodes)
        for i, j in self.edges:
            if i not in known or j not in known:
                raise ValueError(f"edge ({i}, {j}) references an unknown node")
        for n in self.inputs + self.outputs:
            if n not in known:
                raise ValueError(f"unknown input/output node {n}")
        measured = [n for n in self.nodes if n not in set(self.outputs)]
        if sorted(self.order) != sorted(measured):
            raise ValueError("order must list every non-output node exactly once")
        for k, s in self.flow.items():
            if _key(k, s) not in self.edges:
                raise ValueError(f"flow {k} -> {s} is not along an edge")
        self.check_order()

    def neighbors(self, n: int) -> dict:
        """Neighbour -> edge sign."""
        out = {}
        for (i, j), s in self.edges.items():
            if i == n:
                out[j] = s
            elif j == n:
                out[i] = s
        return out

    def sign(self, i: int, j: int) -> int:
        return self.edges[_key(i, j)]

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    def dependencies(self) -> dict:
        """node -> set of nodes whose outcomes feed its measurement parameters."""
        deps = {n: set() for n in self.nodes}
        for k, s in self.flow.items():
            deps[s].add(k)
            for l in self.neighbors(s):
                if l != k:
                    deps[l].add(k)
        return deps

    def check_order(self) -> None:
        pos = {n: i for i, n in enumerate(self.order)}
        for n, ds in self.dependencies().items():
            if n not in pos:
                continue
            for d in ds:
                if d in pos and pos[d] > pos[n]:
                    raise CycleError(f"node {n} is measured before node {d}, whose outcome it needs")

    def topological_order(self) -> list:
        """A measurement order consistent with feed-forward; CycleError if none exists."""
        deps = self.dependencies()
        outputs = set(self.outputs)
        todo = [n for n in self.nodes if n not in outputs]
        done, order = set(), []
        while todo:
            ready = [n for n in todo if all(d in done or d in outputs for d in deps[n])]
            if not ready:
                raise CycleError(f"feed-forward dependencies are cyclic among {sorted(todo)}")
            for n in ready:
                order.append(n)
                done.add(n)
            todo = [n for n in todo if n not in done]
        return order

    def induced(self, keep) -> "ModeGraph":
        keep = [n for n in self.nodes if n in set(keep)]
        ks = set(keep)
        return ModeGraph(
            nodes=keep,
            edges={e: s for e, s in self.edges.items() if e[0] in ks and e[1] in ks},
            inputs=[n for n in self.inputs if n in ks],
            outputs=[n for n in self.outputs if n in ks],
            order=[n for n in self.order if n in ks],
            flow={k: v for k, v in self.flow.items() if k in ks and v in ks},
        )

    # --- interchange --------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "nodes": list(self.nodes),
            "edges": [[i, j, s] for (i, j), s in sorted(self.edges.items())],
            "inputs": list(self.inputs),
            "outputs": list(self.outputs),
            "order": list(self.order),
            "flow": [[k, v] for k, v in sorted(self.flow.items())],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "ModeGraph":
        return cls(
            nodes=d["nodes"],
            edges=[tuple(e) for e in d.get("edges", [])],
            inputs=d.get("inputs", []),
            outputs=d.get("outputs", []),
            order=d.get("order", []),
            flow=dict(tuple(p) for p in d.get("flow", [])),
        )

    @classmethod
    def from_json(cls, text: str) -> "ModeGraph":
        return cls.from_dict(json.loads(text))

    def save(self, path) -> None:
        Path(path).write_text(self.to_json(indent=1))

    @classmethod
    def load(cls, path) -> "ModeGraph":
        return cls.from_json(Path(path).read_text())


def path_graph(n: int, sign: int = 1, outputs=None) -> ModeGraph:
    """Linear cluster 0 - 1 - ... - (n-1); by default the last node is the output."""
    outputs = [n - 1] if outputs is None and n > 1 else (outputs or [])
    flow = {k: k + 1 for k in range(n - 1)} if outputs == [n - 1] else {}
    return ModeGraph(
        nodes=list(range(n)),
        edges={(k, k + 1): sign for k in range(n - 1)},
        inputs=[0] if n else [],
        outputs=outputs,
        flow=flow,
    )
