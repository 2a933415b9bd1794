import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cvbqc.algebra import (
    ByproductFrame,
    ControlledZ,
    Fourier,
    GateWord,
    ParamVector,
    PhaseP,
    PhaseQ,
    SymplecticRep,
    Xdisp,
    Zdisp,
    conjugate_p_by_phase_gate,
    mm_inverse,
    mm_matrix,
    normalize,
    parse_word,
    push_byproduct_through_cz,
    push_x_through_rq,
    to_symplectic,
    word_equal_up_to_byproduct,
)
from cvbqc.algebra.identities import (
    brick_params,
    brick_target,
    brick_word,
    cubic_rescale,
    decompose_dp,
    q_measurement_word,
)
from cvbqc.algebra.random_words import random_gaussian_word, random_word
from cvbqc.algebra.symplectic import symplectic_form
from cvbqc.exceptions import DomainError, NonGaussianWord, Undecidable

reals = st.floats(-5, 5, allow_nan=False)
small = st.floats(-2, 2, allow_nan=False)
params3 = st.tuples(small, small, small).map(lambda t: ParamVector(*t))
gparams = st.tuples(small, small).map(lambda t: ParamVector(t[0], t[1], 0.0))


# --- feed-forward matrices ---------------------------------------------------


def test_mm_matrix_examples():
    np.testing.assert_array_equal(mm_matrix(0), np.eye(3))
    np.testing.assert_array_equal(mm_matrix(1), [[1, 1, 1], [0, 1, 2], [0, 0, 1]])
    np.testing.assert_array_equal(mm_matrix(-2), [[1, -2, 4], [0, 1, -4], [0, 0, 1]])
    np.testing.assert_array_equal(mm_inverse(1), [[1, -1, 1], [0, 1, -2], [0, 0, 1]])


@given(reals, reals)
def test_mm_group_law(m1, m2):
    np.testing.assert_allclose(mm_matrix(m1) @ mm_matrix(m2), mm_matrix(m1 + m2), atol=1e-12 * (1 + (abs(m1) + abs(m2)) ** 2))
    np.testing.assert_allclose(mm_inverse(m1), mm_matrix(-m1), atol=0)


def test_push_x_through_rq_examples():
    assert push_x_through_rq(ParamVector(), 3.0) == (3.0, ParamVector())
    z, v = push_x_through_rq(ParamVector(1, 1, 1), 1.0)
    assert z == 1.0 and v == ParamVector(3, 3, 1)


@given(gparams, small)
def test_push_x_through_rq_symplectic(v, m):
    z, v_new = push_x_through_rq(v, m)
    lhs = to_symplectic(GateWord(1, (Fourier(0), PhaseQ(0, v), Xdisp(0, m))))
    rhs = to_symplectic(GateWord(1, (Zdisp(0, z), Fourier(0), PhaseQ(0, v_new))))
    assert lhs.allclose(rhs.with_phase(rhs.phase + v(m)))


def test_conjugate_p():
    assert conjugate_p_by_phase_gate(ParamVector()).coeffs == ParamVector()
    assert conjugate_p_by_phase_gate(ParamVector(0.7, 0, 0)).a == 0.7
    obs = conjugate_p_by_phase_gate(ParamVector(0, 0, 0.3))
    assert (obs.a, obs.b, obs.c) == (0, 0, 0.3)


# --- words and syntax -------------------------------------------------------


def test_parse_roundtrip():
    text = "CZd@0,1 F@0 Dq(1.0,-2.5,3e-3)@0 X(0.5)@1 Q(2.0)@1 CX@1,0 F^3@1 Dp(0.0,1.0,0.0)@0"
    w = parse_word(text)
    assert w.n_modes == 2
    assert parse_word(str(w)) == w
    assert str(parse_word("Sq(1,2,3)@0")) == "Dq(1.0,2.0,3.0)@0"


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        parse_word("Y(1)@0")
    with pytest.raises(ValueError):
        GateWord(1, (ControlledZ(0, 1),))


def test_word_inverse_is_inverse():
    rng = np.random.default_rng(1)
    w = random_gaussian_word(rng, 3, 10)
    r = to_symplectic(w * w.inverse())
    assert r.allclose(SymplecticRep.identity(3))


# --- symplectic evaluator ---------------------------------------------------


def test_to_symplectic_examples():
    assert to_symplectic(GateWord(1)).allclose(SymplecticRep.identity(1))
    assert to_symplectic(parse_word("F@0 F@0 F@0 F@0")).allclose(SymplecticRep.identity(1))
    np.testing.assert_allclose(to_symplectic(parse_word("Q(3.0)@0")).S, np.diag([3.0, 1 / 3]))
    np.testing.assert_allclose(to_symplectic(parse_word("F@0 F@0")).S, -np.eye(2))


def test_cubic_word_rejected():
    with pytest.raises(NonGaussianWord):
        to_symplectic(parse_word("Dq(0,0,1)@0"))


def test_weyl_phase():
    s, t = 0.7, -1.3
    xz = to_symplectic(parse_word(f"X({s})@0 Z({t})@0"))
    zx = to_symplectic(parse_word(f"Z({t})@0 X({s})@0"))
    assert xz.phase - zx.phase == pytest.approx(-s * t)
    assert (xz @ xz.inverse()).allclose(SymplecticRep.identity(1))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 3), st.integers(1, 15))
def test_random_words_symplectic(seed, n_modes, length):
    w = random_gaussian_word(np.random.default_rng(seed), n_modes, length)
    r = to_symplectic(w)
    omega = symplectic_form(n_modes)
    assert np.abs(r.S @ omega @ r.S.T - omega).max() < 1e-9 * max(1.0, np.abs(r.S).max() ** 2)
    assert r.is_symplectic(tol=1e-9 * max(1.0, np.abs(r.S).max() ** 2))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_compose_associative(seed):
    rng = np.random.default_rng(seed)
    a, b, c = (to_symplectic(random_gaussian_word(rng, 2, 5)) for _ in range(3))
    assert ((a @ b) @ c).allclose(a @ (b @ c), tol=1e-8)


# --- byproducts and normal forms --------------------------------------------


def test_push_byproduct_through_cz_examples():
    zero = ByproductFrame((0.0,), (0.0,))
    (f0, f1), core = push_byproduct_through_cz((zero, zero), 1)
    assert f0.is_identity and f1.is_identity and core.atoms == (ControlledZ(0, 1, 1),)
    x2 = ByproductFrame((2.0,), (0.0,))
    (f0, f1), _ = push_byproduct_through_cz((x2, zero), 1)
    assert (f0.xi, f0.eta, f1.xi, f1.eta) == ((2.0,), (0.0,), (0.0,), (2.0,))
    (f0, f1), _ = push_byproduct_through_cz((x2, zero), -1)
    assert f1.eta == (-2.0,)


def test_normalize_single_x():
    frame, core = normalize(parse_word("X(1)@0"))
    assert frame.xi == (1.0,) and frame.eta == (0.0,) and len(core) == 0


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 3), st.integers(0, 14))
def test_normalize_preserves_semantics(seed, n_modes, length):
    w = random_gaussian_word(np.random.default_rng(seed), n_modes, length)
    frame, core = normalize(w)
    assert not any(isinstance(a, (Xdisp, Zdisp)) for a in core.atoms)
    lhs = to_symplectic(w)
    rhs = frame.to_rep() @ to_symplectic(core)
    scale = max(1.0, np.abs(lhs.S).max(), np.abs(lhs.d).max()) ** 3
    assert lhs.allclose(rhs, tol=1e-9 * scale)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 3))
def test_normalize_idempotent(seed, n_modes):
    w = random_word(np.random.default_rng(seed), n_modes, 10)
    frame, core = normalize(w)
    # a word cannot carry the scalar phase, so compare projectively
    frame2, core2 = normalize(frame.to_word() * core)
    assert frame2.isclose(frame, tol=1e-9 * max(1.0, np.abs(frame.d).max()) ** 3, projective=True)
    assert abs(frame2.phase) < 1e-12
    assert core2 == core


def test_blind_and_plain_orders_agree():
    t0, t1 = ParamVector(0.3, -0.2, 0.5), ParamVector(-1.0, 0.4, -0.7)
    plain = GateWord(2, (PhaseQ(0, t0), PhaseQ(1, t1), ControlledZ(0, 1)))
    blind = GateWord(2, (ControlledZ(0, 1), PhaseQ(0, t0), PhaseQ(1, t1)))
    assert normalize(plain) == normalize(blind)


def test_worked_two_mode_reduction():
    v = ParamVector(0.4, -1.1, 0.9)
    w = GateWord(2, (ControlledZ(0, 1, -1), Fourier(0, 2), Fourier(1, 2), ControlledZ(0, 1), Fourier(0, 2), PhaseQ(0, v), Fourier(1, 2)))
    frame, core = normalize(w)
    assert frame.is_identity
    assert core.atoms == (PhaseQ(0, v),)


def test_word_equal_up_to_byproduct():
    rng = np.random.default_rng(3)
    w = random_word(rng, 2, 8)
    ok, frame = word_equal_up_to_byproduct(w, w)
    assert ok and frame.is_identity
    a = parse_word("Dq(0,0,1)@0 F@0")
    b = parse_word("Dq(0,0,2)@0 F@0")
    with pytest.raises(Undecidable):
        word_equal_up_to_byproduct(a, b)
    assert word_equal_up_to_byproduct(a, parse_word("F@0"))[0] is False


@pytest.mark.parametrize("kind", ["sq", "sp", "cx"])
def test_brick_equalities(kind):
    rng = np.random.default_rng(7)
    for _ in range(20):
        v = ParamVector(*rng.uniform(-1, 1, 2), 0.0)
        top, bottom = brick_params(kind, v)
        w = brick_word(top, bottom, rng.normal(size=(2, 4)), ByproductFrame(rng.normal(size=2), rng.normal(size=2)))
        ok, frame = word_equal_up_to_byproduct(w, brick_target(kind, v))
        assert ok
        assert to_symplectic(w).allclose(frame.to_rep() @ to_symplectic(brick_target(kind, v)))


def test_brick_cubic_rewrite_level():
    v = ParamVector(0.2, -0.5, 1.3)
    top, bottom = brick_params("sq", v)
    w = brick_word(top, bottom, [[0.4, -1.2, 0.3, 2.0], [1.1, 0.0, -0.6, 0.9]])
    frame, core = normalize(w)
    assert core.atoms == (PhaseQ(0, v),) or core.atoms[0].f.isclose(v)


def test_brick_cx_direction():
    # the CX brick realises exp(-i p_0 q_1): bottom wire controls
    w = brick_word(*brick_params("cx"))
    S = to_symplectic(w).S
    assert S[0, 2] == pytest.approx(1.0)  # q_0 -> q_0 + q_1
    assert S[3, 1] == pytest.approx(-1.0)  # p_1 -> p_1 - p_0


# --- fixed constructions ----------------------------------------------------


@given(gparams)
def test_decompose_dp(f):
    assert to_symplectic(decompose_dp(f)).allclose(to_symplectic(GateWord(1, (PhaseP(0, f),))))


def test_decompose_dp_zero_is_identity():
    frame, core = normalize(decompose_dp(ParamVector()))
    assert frame.is_identity and len(core) == 0


def test_cubic_rescale():
    t, w = cubic_rescale(1.0, 8.0)
    assert t == pytest.approx(2.0)
    t, w = cubic_rescale(1.0, 1.0)
    assert t == 1.0
    frame, core = normalize(cubic_rescale(-0.5, -4.0)[1])
    assert core.atoms[0].f.isclose(ParamVector(0, 0, -4.0))
    with pytest.raises(DomainError):
        cubic_rescale(1.0, -8.0)


def test_q_measurement_word():
    r = to_symplectic(q_measurement_word())
    rhs = to_symplectic(GateWord(1, (PhaseQ(0, ParamVector(0, 1, 0)), PhaseP(0, ParamVector(0, 1, 0)))))
    assert r.allclose(rhs)
    # Heisenberg image of p is q
    np.testing.assert_allclose(r.S[1], [1.0, 0.0], atol=1e-12)
