"""Binary/JSON hybrid state files.

Layout: one UTF-8 JSON header line terminated by ``\\n`` followed by raw
little-endian float64 data.  Gaussian: ``mean`` (2N) then ``cov`` (2N x 2N,
row-major).  Fock: amplitudes as interleaved (real, imag) pairs in row-major
order of the per-mode cutoff axes.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .fock import FockState
from .gaussian import GaussianState

FORMAT = "cvbqc-state/1"


def dumps_state(state, **meta) -> bytes:
    if isinstance(state, GaussianState):
        header = {"format": FORMAT, "backend": "gaussian", "n_modes": state.n_modes, **meta}
        data = np.concatenate([state.mean, state.cov.reshape(-1)])
    elif isinstance(state, FockState):
        header = {
            "format": FORMAT,
            "backend": "fock",
            "n_modes": state.n_modes,
            "cutoffs": list(state.cutoffs),
            "leakage": state.leakage,
            "budget": state.budget,
            **meta,
        }
        data = state.amps.reshape(-1).view(np.float64)
    else:
        raise TypeError(f"cannot serialize {type(state).__name__}")
    return json.dumps(header, sort_keys=True).encode() + b"\n" + np.ascontiguousarray(data, dtype="<f8").tobytes()


def loads_state(blob: bytes):
    line, _, payload = blob.partition(b"\n")
    header = json.loads(line)
    if header.get("format") != FORMAT:
        raise ValueError(f"unknown state format {header.get('format')!r}")
    data = np.frombuffer(payload, dtype="<f8")
    n = 2 * header["n_modes"]
    if header["backend"] == "gaussian":
        if data.size != n + n * n:
            raise ValueError("payload size does not match header")
        return GaussianState(data[:n].copy(), data[n:].reshape(n, n).copy())
    if header["backend"] == "fock":
        cutoffs = tuple(header["cutoffs"])
        amps = data.copy().view(np.complex128).reshape(cutoffs)
        return FockState(amps, header.get("leakage", 0.0), header.get("budget", 1e-4))
    raise ValueError(f"unknown backend {header['backend']!r}")


def save_state(path, state, **meta) -> None:
    Path(path).write_bytes(dumps_state(state, **meta))


def load_state(path):
    return loads_state(Path(path).read_bytes())
