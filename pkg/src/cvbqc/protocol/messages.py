"""Messages, transcript and the FIFO channel between client and server.

Only three message kinds exist and none of them has a field for the
client's secrets: a qumode transfer carries an opaque handle, a ``Delta``
carries the three measurement corrections, an ``Outcome`` one real number.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from pathlib import Path

from ..algebra.params import ParamVector
from ..exceptions import ProtocolOrderViolation


@dataclass(frozen=True)
class QumodeTransfer:
    mode: int
    handle: str
    tag = "qumode"

    def payload(self) -> dict:
        return {"handle": self.handle}


@dataclass(frozen=True)
class Delta:
    mode: int
    delta: ParamVector
    tag = "delta"

    def payload(self) -> dict:
        return {"delta": [float(x) for x in self.delta]}


@dataclass(frozen=True)
class Outcome:
    mode: int
    value: float
    tag = "outcome"

    def payload(self) -> dict:
        return {"value": float(self.value)}


MESSAGE_TYPES = {cls.tag: cls for cls in (QumodeTransfer, Delta, Outcome)}


def message_to_dict(msg) -> dict:
    return {"tag": msg.tag, "mode": int(msg.mode), **msg.payload()}


def message_from_dict(d: dict):
    tag = d.get("tag")
    if tag == "qumode":
        return QumodeTransfer(int(d["mode"]), str(d["handle"]))
    if tag == "delta":
        return Delta(int(d["mode"]), ParamVector.from_array(d["delta"]))
    if tag == "outcome":
        return Outcome(int(d["mode"]), float(d["value"]))
    raise ValueError(f"unknown message tag {tag!r}")


class Transcript:
    """Everything the server sees: the ordered messages (states are behind the transfer handles)."""

    def __init__(self, messages=None):
        self.messages = list(messages or [])

    def append(self, msg) -> None:
        self.messages.append(msg)

    def __len__(self):
        return len(self.messages)

    def __iter__(self):
        return iter(self.messages)

    def of_type(self, cls) -> list:
        return [m for m in self.messages if isinstance(m, cls)]

    @property
    def deltas(self) -> list:
        return self.of_type(Delta)

    @property
    def outcomes(self) -> list:
        return self.of_type(Outcome)

    def pattern(self) -> str:
        """Message tags as a string, ``Q`` / ``D`` / ``O``."""
        return "".join({"qumode": "Q", "delta": "D", "outcome": "O"}[m.tag] for m in self.messages)

    def to_jsonl(self) -> str:
        return "".join(json.dumps(message_to_dict(m), sort_keys=True) + "\n" for m in self.messages)

    @classmethod
    def from_jsonl(cls, text: str) -> "Transcript":
        return cls(message_from_dict(json.loads(line)) for line in text.splitlines() if line.strip())

    def save(self, path) -> None:
        Path(path).write_text(self.to_jsonl())


class Channel:
    """Two FIFO queues plus the message-order automaton.

    The automaton accepts ``QumodeTransfer^N (Delta(j) Outcome(j))^M`` where
    the ``Delta`` modes follow the publicly agreed measurement ``order``.
    """

    def __init__(self, order=None, record: bool = True):
        self.order = None if order is None else list(order)
        self.record = record
        self.transcript = Transcript()
        self._to_bob, self._to_alice = deque(), deque()
        self._phase = "transfer"
        self._transferred = set()
        self._next = 0
        self._pending = None  # mode of the Delta awaiting its Outcome

    def _check(self, msg) -> None:
        if isinstance(msg, QumodeTransfer):
            if self._phase != "transfer":
                raise ProtocolOrderViolation(f"qumode {msg.mode} sent after the measurement phase started")
            if msg.mode in self._transferred:
                raise ProtocolOrderViolation(f"qumode {msg.mode} transferred twice")
            self._transferred.add(msg.mode)
        elif isinstance(msg, Delta):
            if self._pending is not None:
                raise ProtocolOrderViolation(f"Delta({msg.mode}) sent before Outcome({self._pending})")
            if msg.mode not in self._transferred:
                raise ProtocolOrderViolation(f"Delta({msg.mode}) for a qumode that was never transferred")
            if self.order is not None:
                if self._next >= len(self.order) or self.order[self._next] != msg.mode:
                    expected = self.order[self._next] if self._next < len(self.order) else None
                    raise ProtocolOrderViolation(f"Delta({msg.mode}) out of order; expected Delta({expected})")
            self._phase = "measure"
            self._pending = msg.mode
        elif isinstance(msg, Outcome):
            if self._pending != msg.mode:
                raise ProtocolOrderViolation(f"Outcome({msg.mode}) does not answer the pending Delta({self._pending})")
            self._pending = None
            self._next += 1
        else:
            raise TypeError(f"not a protocol message: {msg!r}")

    def send_to_bob(self, msg) -> None:
        if isinstance(msg, Outcome):
            raise ProtocolOrderViolation("the client does not send outcomes")
        self._check(msg)
        self._to_bob.append(msg)
        if self.record:
            self.transcript.append(msg)

    def send_to_alice(self, msg) -> None:
        if not isinstance(msg, Outcome):
            raise ProtocolOrderViolation(f"the server only sends outcomes, got {type(msg).__name__}")
        self._check(msg)
        self._to_alice.append(msg)
        if self.record:
            self.transcript.append(msg)

    def bob_receive(self):
        if not self._to_bob:
            raise ProtocolOrderViolation("server expected a message but the queue is empty")
        return self._to_bob.popleft()

    def alice_receive(self):
        if not self._to_alice:
            raise ProtocolOrderViolation("client expected an outcome but the queue is empty")
        return self._to_alice.popleft()

    def close(self) -> None:
        if self._pending is not None:
            raise ProtocolOrderViolation(f"run ended with Delta({self._pending}) unanswered")
        if self.order is not None and self._next != len(self.order):
            raise ProtocolOrderViolation(f"run ended after {self._next} of {len(self.order)} measurements")


__all__ = [
    "Channel",
    "Delta",
    "MESSAGE_TYPES",
    "Outcome",
    "QumodeTransfer",
    "Transcript",
    "message_from_dict",
    "message_to_dict",
]
