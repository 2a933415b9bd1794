"""Fixed constructions and the machine-checked identity suite.

Every identity is a small function returning an :class:`IdentityResult`.
Checks are done with the symplectic evaluator where the words are Gaussian
and with the rewrite engine (``normalize``) otherwise.  Randomised
identities draw their parameters from a seeded generator.

The brick identities rebuild the two-wire teleportation circuit with live
feed-forward: before every step the byproduct frame of the circuit so far is
extracted and the step parameter is corrected with ``mm_inverse``.  The
feed-forward matrices are looked up on :mod:`cvbqc.algebra.params` at call
time, so a corrupted ``M_m`` makes the brick checks fail.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from ..exceptions import DomainError, Undecidable
from . import params as _params
from .params import ParamVector, conjugate_p_by_phase_gate
from .rewrite import (
    ByproductFrame,
    absorb_atom,
    cores_equal,
    normalize,
    push_byproduct_through_cz,
    word_equal_up_to_byproduct,
)
from .symplectic import SymplecticRep, symplectic_form, to_symplectic
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
)

ZERO = ParamVector()


# ---------------------------------------------------------------------------
# fixed words


def decompose_dp(f: ParamVector) -> GateWord:
    """Four teleportation steps realising D_p^f: (F D_q^0)^2 (F D_q^{f(-.)}) (F D_q^0)."""
    atoms = (
        Fourier(0), PhaseQ(0, ZERO),
        Fourier(0), PhaseQ(0, ZERO),
        Fourier(0), PhaseQ(0, f.reflected()),
        Fourier(0), PhaseQ(0, ZERO),
    )  # fmt: skip
    return GateWord(1, atoms)


def cubic_rescale(gamma: float, gamma_prime: float):
    """Squeezing that turns e^{i gamma q^3/3} into e^{i gamma' q^3/3}.

    Returns ``(t, word)`` with ``t = (gamma'/gamma)^(1/3)`` and
    ``word = Q^dagger(t) D_q(0,0,gamma) Q(t)``.
    """
    if gamma == 0 or not gamma_prime / gamma > 0:
        raise DomainError(f"need gamma' / gamma > 0, got gamma={gamma}, gamma'={gamma_prime}")
    t = float(np.cbrt(gamma_prime / gamma))
    w = GateWord(1, (Squeeze(0, 1.0 / t), PhaseQ(0, ParamVector(0.0, 0.0, gamma)), Squeeze(0, t)))
    return t, w


def q_measurement_word() -> GateWord:
    """F . F e^{iq^2/2} . F e^{iq^2/2} . F  (= e^{iq^2/2} e^{ip^2/2})."""
    shear = ParamVector(0.0, 1.0, 0.0)
    return GateWord(1, (Fourier(0), Fourier(0), PhaseQ(0, shear), Fourier(0), PhaseQ(0, shear), Fourier(0)))


def teleport_step(mode: int, u: ParamVector, m: float = 0.0) -> tuple:
    """Atoms of one teleportation step X(m) F D_q(u) (operator order)."""
    return (Xdisp(mode, m), Fourier(mode), PhaseQ(mode, u))


def brick_word(top, bottom, outcomes=None, incoming=None) -> GateWord:
    """Two-wire brick ``CZ^dagger (steps 3,4) CZ (steps 1,2)`` with feed-forward.

    ``top`` / ``bottom`` are the four logical step parameters of each wire in
    application order.  ``outcomes[w][k]`` is the X byproduct of step k on wire
    w; ``incoming`` is an optional 2-mode :class:`ByproductFrame` already
    present on the input.  Each step parameter is corrected by the X part of
    the current frame so that the displacement-free core is the ideal circuit.
    """
    outcomes = np.zeros((2, 4)) if outcomes is None else np.asarray(outcomes, dtype=float)
    current = GateWord(2) if incoming is None else incoming.to_word()
    frame, _ = normalize(current, canonical=False)
    phis = (list(top), list(bottom))
    for col in range(4):
        if col == 2:
            current = GateWord(2, (ControlledZ(0, 1, 1),)) * current
            frame, _ = absorb_atom(ControlledZ(0, 1, 1), frame)
        for w in (0, 1):
            u = ParamVector.from_array(_params.mm_inverse(frame.xi[w]) @ phis[w][col].as_array())
            step = teleport_step(w, u, outcomes[w, col])
            current = GateWord(2, step) * current
            for atom in reversed(step):
                frame, _ = absorb_atom(atom, frame)
    return GateWord(2, (ControlledZ(0, 1, -1),)) * current


def brick_params(kind: str, v: ParamVector | None = None):
    """Logical step parameters (top, bottom) of the three standard bricks."""
    v = ZERO if v is None else v
    shear = ParamVector(0.0, 1.0, 0.0)
    if kind == "sq":
        return [v, ZERO, ZERO, ZERO], [ZERO] * 4
    if kind == "sp":
        # F D_q(f(-.)) F = F^2 D_p^f on the top wire
        return [ZERO, v.reflected(), ZERO, ZERO], [ZERO] * 4
    if kind == "cx":
        return [ZERO, shear, ZERO, -shear], [shear, ZERO, ZERO, ZERO]
    raise ValueError(f"unknown brick kind {kind!r}")


def brick_target(kind: str, v: ParamVector | None = None) -> GateWord:
    v = ZERO if v is None else v
    if kind == "sq":
        return GateWord(2, (PhaseQ(0, v),))
    if kind == "sp":
        return GateWord(2, (PhaseP(0, v),))
    if kind == "cx":
        # exp(-i p_0 q_1): control is the bottom wire
        return GateWord(2, (ControlledX(1, 0, 1),))
    raise ValueError(f"unknown brick kind {kind!r}")


def quadratic_generator_rep(K: np.ndarray) -> SymplecticRep:
    """Symplectic matrix of exp(i r^T K r / 2) by matrix exponential."""
    n = K.shape[0] // 2
    return SymplecticRep(expm(-symplectic_form(n) @ K), np.zeros(2 * n), 0.0)


# ---------------------------------------------------------------------------
# identity suite


@dataclass
class IdentityResult:
    name: str
    relation: str
    passed: bool
    max_deviation: float
    level: str  # "exact", "projective", "rewrite" or "matrix"
    n_checks: int = 1
    projective_ok: bool | None = None
    detail: str = ""

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "relation": self.relation,
            "passed": self.passed,
            "max_deviation": self.max_deviation,
            "level": self.level,
            "n_checks": self.n_checks,
            "projective_ok": self.projective_ok,
            "detail": self.detail,
        }


_REGISTRY: list = []


def identity(name: str, relation: str):
    def deco(fn):
        _REGISTRY.append((name, relation, fn))
        return fn

    return deco


def _rep(text: str, n: int = 1) -> SymplecticRep:
    return to_symplectic(GateWord.parse(text, n))


def _dev(r1: SymplecticRep, r2: SymplecticRep):
    d = r1.deviation(r2)
    return max(d["S"], d["d"], d["phase"]), max(d["S"], d["d"])


class _Acc:
    """Accumulates deviations over many random draws."""

    def __init__(self, tol):
        self.tol = tol
        self.exact = 0.0
        self.proj = 0.0
        self.n = 0
        self.failures: list = []

    def add(self, exact, proj=None, note=""):
        self.n += 1
        self.exact = max(self.exact, exact)
        self.proj = max(self.proj, exact if proj is None else proj)
        if exact > self.tol and note and len(self.failures) < 3:
            self.failures.append(note)

    def add_bool(self, ok: bool, note=""):
        self.add(0.0 if ok else math.inf, note=note)

    def result(self, level="exact"):
        return self.exact <= self.tol, self.exact, level, self.n, self.proj <= self.tol, "; ".join(self.failures)


def _rand_v(rng, cubic=False, scale=1.5) -> ParamVector:
    a, b, c = rng.uniform(-scale, scale, size=3)
    return ParamVector(a, b, c if cubic else 0.0)


@identity("weyl_commutation", "X(s)Z(t) = e^{-ist} Z(t)X(s)")
def _weyl(rng, n, tol):
    acc = _Acc(tol)
    for s, t in rng.uniform(-3, 3, size=(n, 2)).tolist():
        xz = _rep(f"X({s!r})@0 Z({t!r})@0")
        zx = _rep(f"Z({t!r})@0 X({s!r})@0")
        acc.add(*_dev(xz, zx.with_phase(zx.phase - s * t)))
        # round trip restores the phase
        acc.add(*_dev(xz @ xz.inverse(), SymplecticRep.identity(1)))
    return acc.result()


@identity("q_shift", "q X(s) = X(s)(q + s)")
def _qshift(rng, n, tol):
    acc = _Acc(tol)
    for s in rng.uniform(-3, 3, size=n).tolist():
        r = _rep(f"X({s!r})@0")
        acc.add(max(np.abs(r.S - np.eye(2)).max(), abs(r.d[0] - s), abs(r.d[1])))
    return acc.result()


@identity("p_shift", "p Z(s) = Z(s)(p + s)")
def _pshift(rng, n, tol):
    acc = _Acc(tol)
    for s in rng.uniform(-3, 3, size=n).tolist():
        r = _rep(f"Z({s!r})@0")
        acc.add(max(np.abs(r.S - np.eye(2)).max(), abs(r.d[1] - s), abs(r.d[0])))
    return acc.result()


@identity("fourier_fourth_power", "F^4 = I")
def _f4(rng, n, tol):
    acc = _Acc(tol)
    acc.add(*_dev(_rep("F@0 F@0 F@0 F@0"), SymplecticRep.identity(1)))
    return acc.result()


@identity("fourier_square_parity", "F^2 |s>_q = |-s>_q, F^2 |s>_p = |-s>_p")
def _f2(rng, n, tol):
    acc = _Acc(tol)
    acc.add(*_dev(_rep("F@0 F@0"), SymplecticRep(-np.eye(2), np.zeros(2))))
    return acc.result()


@identity("fourier_conjugates_q", "F^dagger q F = -p")
def _fq(rng, n, tol):
    r = _rep("F@0")
    dev = np.abs(r.S[0] - np.array([0.0, -1.0])).max()
    return dev <= tol, dev, "exact", 1, dev <= tol, ""


@identity("fourier_conjugates_p", "F^dagger p F = q")
def _fp(rng, n, tol):
    r = _rep("F@0")
    dev = np.abs(r.S[1] - np.array([1.0, 0.0])).max()
    return dev <= tol, dev, "exact", 1, dev <= tol, ""


@identity("z_through_fourier", "Z(m) F = F X(m)")
def _zf(rng, n, tol):
    acc = _Acc(tol)
    for m in rng.uniform(-3, 3, size=n).tolist():
        acc.add(*_dev(_rep(f"Z({m!r})@0 F@0"), _rep(f"F@0 X({m!r})@0")))
    return acc.result()


@identity("x_through_fourier", "X(m) F = F Z(-m)")
def _xf(rng, n, tol):
    acc = _Acc(tol)
    for m in rng.uniform(-3, 3, size=n).tolist():
        acc.add(*_dev(_rep(f"X({m!r})@0 F@0"), _rep(f"F@0 Z({-m!r})@0")))
    return acc.result()


def _cz_push(rng, n, tol, sign, first):
    acc = _Acc(tol)
    g = "CZ" if sign == 1 else "CZd"
    for m in rng.uniform(-3, 3, size=n).tolist():
        if first:
            lhs, rhs = f"{g}@0,1 X({m!r})@0", f"X({m!r})@0 Z({sign * m!r})@1 {g}@0,1"
        else:
            lhs, rhs = f"{g}@0,1 X({m!r})@1", f"Z({sign * m!r})@0 X({m!r})@1 {g}@0,1"
        acc.add(*_dev(_rep(lhs, 2), _rep(rhs, 2)))
        # the packaged push-through rule agrees with the evaluator
        f = [ByproductFrame((m,), (0.0,)), ByproductFrame((0.0,), (0.0,))]
        if not first:
            f.reverse()
        (f0, f1), _ = push_byproduct_through_cz(tuple(f), sign)
        rr = _rep(rhs, 2)
        acc.add(np.abs(np.array([f0.xi[0], f0.eta[0], f1.xi[0], f1.eta[0]]) - rr.d).max())
    return acc.result()


@identity("cz_push_x_first", "CZ (X(m) x I) = (X(m) x Z(m)) CZ")
def _cz1(rng, n, tol):
    return _cz_push(rng, n, tol, 1, True)


@identity("cz_push_x_second", "CZ (I x X(m)) = (Z(m) x X(m)) CZ")
def _cz2(rng, n, tol):
    return _cz_push(rng, n, tol, 1, False)


@identity("czdag_push_x_first", "CZ^dagger (X(m) x I) = (X(m) x Z(-m)) CZ^dagger")
def _czd1(rng, n, tol):
    return _cz_push(rng, n, tol, -1, True)


@identity("czdag_push_x_second", "CZ^dagger (I x X(m)) = (Z(-m) x X(m)) CZ^dagger")
def _czd2(rng, n, tol):
    return _cz_push(rng, n, tol, -1, False)


@identity("dq_from_teleport_steps", "(F D_q^0)^3 F D_q^f = D_q^f")
def _dq(rng, n, tol):
    acc = _Acc(tol)
    for _ in range(n):
        v = _rand_v(rng)
        w = GateWord(1, (Fourier(0), PhaseQ(0, ZERO)) * 3 + (Fourier(0), PhaseQ(0, v)))
        acc.add(*_dev(to_symplectic(w), to_symplectic(GateWord(1, (PhaseQ(0, v),)))))
        vc = _rand_v(rng, cubic=True)
        wc = GateWord(1, (Fourier(0), PhaseQ(0, ZERO)) * 3 + (Fourier(0), PhaseQ(0, vc)))
        f, core = normalize(wc)
        acc.add_bool(f.is_identity and cores_equal(core, GateWord(1, (PhaseQ(0, vc),))), "cubic core mismatch")
    return acc.result()


@identity("dp_decomposition", "(F D_q^0)^2 (F D_{-q}^f)(F D_q^0) = D_p^f")
def _dp(rng, n, tol):
    acc = _Acc(tol)
    for _ in range(n):
        v = _rand_v(rng)
        acc.add(*_dev(to_symplectic(decompose_dp(v)), to_symplectic(GateWord(1, (PhaseP(0, v),)))))
        vc = _rand_v(rng, cubic=True)
        f, core = normalize(decompose_dp(vc))
        acc.add_bool(f.is_identity and cores_equal(core, GateWord(1, (PhaseP(0, vc),))), "cubic core mismatch")
    return acc.result()


@identity("rq_pushthrough", "R_q(v) X(m) = Z(m) R_q(M_m v)")
def _rq(rng, n, tol):
    acc = _Acc(tol)
    for _ in range(n):
        v, m = _rand_v(rng), rng.uniform(-2, 2)
        z, v_new = _params.push_x_through_rq(v, m)
        lhs = to_symplectic(GateWord(1, (Fourier(0), PhaseQ(0, v), Xdisp(0, m))))
        rhs = to_symplectic(GateWord(1, (Zdisp(0, z), Fourier(0), PhaseQ(0, v_new))))
        # the reordering leaves the scalar e^{i f_v(m)}
        acc.add(*_dev(lhs, rhs.with_phase(rhs.phase + v(m))))
    return acc.result()


@identity("mm_group_law", "M_m M_m' = M_{m+m'}")
def _mm(rng, n, tol):
    acc = _Acc(1e-12)
    for m1, m2 in rng.uniform(-3, 3, size=(n, 2)).tolist():
        lhs = _params.mm_matrix(m1) @ _params.mm_matrix(m2)
        acc.add(float(np.abs(lhs - _params.mm_matrix(m1 + m2)).max() / max(1.0, (abs(m1) + abs(m2)) ** 2)))
    return acc.result("matrix")


@identity("mm_inverse", "M_m^{-1} = M_{-m} and M_m M_m^{-1} = I")
def _mminv(rng, n, tol):
    acc = _Acc(1e-12)
    for m in rng.uniform(-3, 3, size=n).tolist():
        scale = max(1.0, m * m)
        acc.add(float(np.abs(_params.mm_inverse(m) - _params.mm_matrix(-m)).max() / scale))
        acc.add(float(np.abs(_params.mm_matrix(m) @ _params.mm_inverse(m) - np.eye(3)).max() / scale))
    return acc.result("matrix")


def _conj_check(rng, n, tol, k):
    acc = _Acc(tol)
    for s in rng.uniform(-3, 3, size=n).tolist():
        coeffs = [0.0, 0.0, 0.0]
        coeffs[k - 1] = s
        f = ParamVector(*coeffs)
        obs = conjugate_p_by_phase_gate(f)
        # oracle: derivative of f(q) = s q^k / k via numpy polynomials
        poly = np.polynomial.Polynomial([0.0] + [c / (i + 1) for i, c in enumerate(coeffs)])
        deriv = poly.deriv().coef
        deriv = np.pad(deriv, (0, 3 - len(deriv)))
        acc.add(float(np.abs(np.array([obs.a, obs.b, obs.c]) - deriv[:3]).max()))
        if k < 3:
            # Heisenberg row of p under D_q^f: p + a + b q
            r = to_symplectic(GateWord(1, (PhaseQ(0, f),)))
            acc.add(float(max(abs(r.d[1] - obs.a), abs(r.S[1, 0] - obs.b), abs(r.S[1, 1] - 1.0))))
    return acc.result()


@identity("conjugation_linear", "e^{-isq} p e^{isq} = p + s")
def _c1(rng, n, tol):
    return _conj_check(rng, n, tol, 1)


@identity("conjugation_quadratic", "e^{-isq^2/2} p e^{isq^2/2} = p + s q")
def _c2(rng, n, tol):
    return _conj_check(rng, n, tol, 2)


@identity("conjugation_cubic", "e^{-isq^3/3} p e^{isq^3/3} = p + s q^2")
def _c3(rng, n, tol):
    return _conj_check(rng, n, tol, 3)


@identity("q_measurement_word", "F . F e^{iq^2/2} . F e^{iq^2/2} . F = e^{iq^2/2} e^{ip^2/2}")
def _qm(rng, n, tol):
    acc = _Acc(tol)
    rhs = GateWord(1, (PhaseQ(0, ParamVector(0, 1, 0)), PhaseP(0, ParamVector(0, 1, 0))))
    acc.add(*_dev(to_symplectic(q_measurement_word()), to_symplectic(rhs)))
    return acc.result()


@identity("q_measurement_observable", "e^{-ip^2/2} e^{-iq^2/2} p e^{iq^2/2} e^{ip^2/2} = q")
def _qmo(rng, n, tol):
    r = to_symplectic(q_measurement_word())
    row = r.S[1]
    dev = float(max(np.abs(row - np.array([1.0, 0.0])).max(), abs(r.d[1])))
    return dev <= tol, dev, "exact", 1, dev <= tol, ""


@identity("sq_commutes_with_cz", "CZ (S_q(t1) x S_q(t2)) = (S_q(t1) x S_q(t2)) CZ")
def _sqcz(rng, n, tol):
    acc = _Acc(tol)
    for _ in range(n):
        for cubic in (False, True):
            t1, t2 = _rand_v(rng, cubic), _rand_v(rng, cubic)
            sign = int(rng.choice([-1, 1]))
            a = GateWord(2, (ControlledZ(0, 1, sign), PhaseQ(0, t1), PhaseQ(1, t2)))
            b = GateWord(2, (PhaseQ(0, t1), PhaseQ(1, t2), ControlledZ(0, 1, sign)))
            if not cubic:
                acc.add(*_dev(to_symplectic(a), to_symplectic(b)))
            fa, ca = normalize(a)
            fb, cb = normalize(b)
            acc.add_bool(fa.isclose(fb) and cores_equal(ca, cb), "normal forms differ")
    return acc.result()


def _brick_check(rng, n, tol, kind, cubic):
    acc = _Acc(tol)
    for _ in range(n):
        v = _rand_v(rng, cubic)
        top, bottom = brick_params(kind, v)
        outcomes = rng.normal(0.0, 1.5, size=(2, 4))
        incoming = ByproductFrame(tuple(rng.normal(0, 1, 2)), tuple(rng.normal(0, 1, 2)))
        lhs = brick_word(top, bottom, outcomes, incoming)
        rhs = brick_target(kind, v)
        if cubic:
            try:
                ok, _ = word_equal_up_to_byproduct(lhs, rhs)
            except Undecidable as exc:
                ok = False
                acc.add_bool(False, str(exc)[:120])
                continue
            acc.add_bool(ok, f"v={tuple(v)}")
        else:
            ok, frame = word_equal_up_to_byproduct(lhs, rhs)
            r_lhs = to_symplectic(lhs)
            r_rhs = frame.to_rep() @ to_symplectic(rhs)
            acc.add(*_dev(r_lhs, r_rhs), note=f"v={tuple(v)}")
    return acc.result("rewrite" if cubic else "exact")


@identity("brick_sq", "brick(v) = P (S_q(v) x I), Gaussian v")
def _ba(rng, n, tol):
    return _brick_check(rng, n, tol, "sq", False)


@identity("brick_sq_cubic", "brick(v) = P (S_q(v) x I), cubic v, rewrite level")
def _bac(rng, n, tol):
    return _brick_check(rng, n, tol, "sq", True)


@identity("brick_sp", "brick(v) = P (S_p(v) x I), Gaussian v")
def _bb(rng, n, tol):
    return _brick_check(rng, n, tol, "sp", False)


@identity("brick_sp_cubic", "brick(v) = P (S_p(v) x I), cubic v, rewrite level")
def _bbc(rng, n, tol):
    return _brick_check(rng, n, tol, "sp", True)


@identity("brick_cx", "brick(CX program) = P CX")
def _bc(rng, n, tol):
    return _brick_check(rng, n, tol, "cx", False)


@identity("cx_bch_factorization", "(e^{-ip^2/2} x I) CZ (e^{ip^2/2} x I) = e^{i q q} e^{-i p q} (I x e^{-iq^2/2})")
def _bch(rng, n, tol):
    acc = _Acc(tol)
    lhs = to_symplectic(GateWord.parse("Dp(0,-1,0)@0 CZ@0,1 Dp(0,1,0)@0", 2))
    rhs = to_symplectic(GateWord.parse("CZ@0,1 CX@1,0 Dq(0,-1,0)@1", 2))
    acc.add(*_dev(lhs, rhs))
    # e^{A+B} with A + B = i (q_0 - p_0) q_1 evaluated directly
    K = np.zeros((4, 4))
    K[0, 2] = K[2, 0] = 1.0
    K[1, 2] = K[2, 1] = -1.0
    acc.add(*_dev(lhs, quadratic_generator_rep(K)))
    return acc.result()


@identity("squeeze_action", "Q(t) = e^{-i ln t (qp+pq)/2}: q -> t q, p -> p / t")
def _sq(rng, n, tol):
    acc = _Acc(tol)
    for t in rng.uniform(0.2, 3.0, size=n).tolist():
        r = to_symplectic(GateWord(1, (Squeeze(0, t),)))
        acc.add(float(np.abs(r.S - np.diag([t, 1 / t])).max()))
        # generator -ln t (qp + pq)/2 = r^T K r / 2 with K = -ln t [[0,1],[1,0]]
        acc.add(*_dev(r, quadratic_generator_rep(-math.log(t) * np.array([[0.0, 1.0], [1.0, 0.0]]))))
    return acc.result()


@identity("cubic_rescaling", "Q^dagger(t) e^{i gamma q^3/3} Q(t) = e^{i gamma' q^3/3}, t = (gamma'/gamma)^{1/3}")
def _cr(rng, n, tol):
    acc = _Acc(tol)
    for _ in range(n):
        g = rng.uniform(0.1, 3) * rng.choice([-1, 1])
        gp = g * rng.uniform(0.1, 10)
        t, w = cubic_rescale(g, gp)
        acc.add(abs(t**3 - gp / g) / max(1.0, gp / g))
        f, core = normalize(w)
        acc.add_bool(f.is_identity and cores_equal(core, GateWord(1, (PhaseQ(0, ParamVector(0, 0, gp)),))), "core")
    return acc.result("rewrite")


@identity("symplectic_closure", "to_symplectic(w).S is symplectic for random Gaussian words")
def _symp(rng, n, tol):
    from .random_words import random_gaussian_word

    acc = _Acc(tol)
    for _ in range(n):
        w = random_gaussian_word(rng, n_modes=3, length=12)
        r = to_symplectic(w)
        omega = symplectic_form(3)
        acc.add(float(np.abs(r.S @ omega @ r.S.T - omega).max() / max(1.0, np.abs(r.S).max() ** 2)))
    return acc.result()


def identity_names() -> list:
    return [name for name, _, _ in _REGISTRY]


def verify_identities(seed: int = 0, n_random: int = 100, tol: float = 1e-9, names=None) -> list:
    """Run the identity suite; returns one :class:`IdentityResult` per identity."""
    results = []
    for idx, (name, relation, fn) in enumerate(_REGISTRY):
        if names is not None and name not in names:
            continue
        rng = np.random.default_rng([seed, idx])
        t0 = time.perf_counter()
        passed, dev, level, n_checks, proj_ok, detail = fn(rng, n_random, tol)
        res = IdentityResult(name, relation, bool(passed), float(dev), level, n_checks, bool(proj_ok), detail)
        res.detail = (detail + f" [{1e3 * (time.perf_counter() - t0):.1f} ms]").strip()
        results.append(res)
    return results
