import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from cvbqc.algebra import GateWord, ParamVector, parse_word
from cvbqc.algebra.params import ObservablePoly
from cvbqc.algebra.random_words import random_gaussian_word
from cvbqc.backends import (
    FockState,
    GaussianState,
    fidelity,
    homodyne,
    loads_state,
    dumps_state,
    make_squeezed_vacuum,
    suggest_cutoff,
    trace_distance,
)
from cvbqc.exceptions import CutoffTooSmall, NonGaussianWord, ShapeMismatch, UnsupportedObservable

P = parse_word


# --- squeezed vacuum -------------------------------------------------------

def test_vacuum_is_omega_one():
    s = make_squeezed_vacuum(1.0)
    np.testing.assert_allclose(s.cov, np.diag([0.5, 0.5]))


def test_squeezed_variances_by_quadrature():
    # independent oracle: integrate the printed wavefunction numerically
    omega = 0.5
    p = np.linspace(-10, 10, 20001)
    psi_p = np.exp(-p**2 / (2 * omega**2)) / (np.pi * omega**2) ** 0.25
    var_p = np.trapezoid(p**2 * psi_p**2, p)
    # q-wavefunction is the Fourier transform: exp(-q^2 Omega^2 / 2)
    q = np.linspace(-40, 40, 40001)
    psi_q2 = np.exp(-(q**2) * omega**2)
    var_q = np.trapezoid(q**2 * psi_q2, q) / np.trapezoid(psi_q2, q)
    s = make_squeezed_vacuum(omega)
    assert s.cov[1, 1] == pytest.approx(var_p, rel=1e-9) == pytest.approx(0.125)
    assert s.cov[0, 0] == pytest.approx(var_q, rel=1e-9) == pytest.approx(2.0)


def test_fock_squeezed_moments():
    s = make_squeezed_vacuum(0.5, backend="fock", cutoff=40)
    mean, cov = s.quadrature_moments()
    assert cov[1, 1] == pytest.approx(0.125, rel=0.01)
    assert cov[0, 0] == pytest.approx(2.0, rel=0.01)
    assert abs(s.norm - 1) < 1e-12


def test_fock_cutoff_too_small():
    with pytest.raises(CutoffTooSmall):
        make_squeezed_vacuum(0.1, backend="fock", cutoff=20)


def test_omega_must_be_positive():
    with pytest.raises(ValueError):
        make_squeezed_vacuum(0.0)


@given(st.floats(0.01, 1.0))
def test_gaussian_var_p_exact(omega):
    assert make_squeezed_vacuum(omega).cov[1, 1] == omega**2 / 2


# --- apply_word ------------------------------------------------------------

def _random_gaussian_state(rng, n):
    w = random_gaussian_word(rng, n, length=6)
    return GaussianState.squeezed_vacuum(0.7, n).apply_word(w)


def test_empty_word():
    s = make_squeezed_vacuum(0.5, n_modes=2)
    t = s.apply_word(GateWord(2, []))
    np.testing.assert_array_equal(t.cov, s.cov)


def test_fourier_fourth_power_gaussian():
    s = _random_gaussian_state(np.random.default_rng(1), 1)
    t = s.apply_word(P("F@0 F@0 F@0 F@0"))
    np.testing.assert_allclose(t.cov, s.cov, atol=1e-9)
    np.testing.assert_allclose(t.mean, s.mean, atol=1e-9)


def test_fourier_fourth_power_fock():
    s = FockState.squeezed_vacuum(0.7, 30).apply_word(P("Z(0.3)@0 X(0.5)@0"))
    assert fidelity(s, s.apply_word(P("F@0 F@0 F@0 F@0"))) == pytest.approx(1.0, abs=1e-12)


def test_gaussian_rejects_cubic():
    with pytest.raises(NonGaussianWord):
        make_squeezed_vacuum(0.5).apply_word(P("Dq(0, 0, 0.1)@0"))


def test_cz_cross_backend():
    word = P("CZ@0,1")
    g = make_squeezed_vacuum(0.5, n_modes=2).apply_word(word)
    f = make_squeezed_vacuum(0.5, backend="fock", cutoff=40, n_modes=2).apply_word(word)
    _, cov = f.quadrature_moments()
    np.testing.assert_allclose(cov, g.cov, rtol=0.01, atol=0.01 * np.abs(g.cov).max())


@settings(max_examples=6, deadline=None)
@given(st.integers(0, 2**31), st.floats(0.3, 1.0))
def test_cross_backend_moments(seed, omega):
    rng = np.random.default_rng(seed)
    word = random_gaussian_word(rng, 1, length=4, scale=0.5)
    # size the cutoff for the most demanding intermediate state, not just the final one
    g = GaussianState.squeezed_vacuum(omega)
    cutoff = suggest_cutoff(g.mean, g.cov)
    for atom in reversed(word.atoms):
        g = g.apply_word(GateWord(1, (atom,)))
        cutoff = max(cutoff, suggest_cutoff(g.mean, g.cov))
    f = FockState.squeezed_vacuum(omega, cutoff).apply_word(word)
    mean, cov = f.quadrature_moments()
    scale = max(1.0, np.abs(g.cov).max())
    np.testing.assert_allclose(mean, g.mean, atol=0.01 * max(1.0, np.abs(g.mean).max()))
    np.testing.assert_allclose(cov, g.cov, atol=0.01 * scale)


def test_fock_word_then_inverse():
    rng = np.random.default_rng(3)
    word = random_gaussian_word(rng, 2, length=6, scale=0.4) * P("Dq(0, 0, 0.05)@1", 2)
    s = make_squeezed_vacuum(0.8, backend="fock", cutoff=40, n_modes=2)
    back = s.apply_word(word).apply_word(word.inverse())
    assert fidelity(s, back) >= 1 - 10 * s.budget


def test_cubic_cutoff_convergence():
    # no closed form for the truncated cubic gate: halving/doubling the cutoff must not move results
    word = P("Dq(0, 0, 0.05)@0")
    vals = []
    for d in (40, 80):
        s = FockState.squeezed_vacuum(0.8, d).apply_word(word)
        mean, cov = s.quadrature_moments()
        vals.append(np.concatenate([mean, cov.ravel()]))
    assert np.max(np.abs(vals[0] - vals[1])) < 1e-3


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**31))
def test_gaussian_stays_physical(seed):
    rng = np.random.default_rng(seed)
    s = _random_gaussian_state(rng, 3)
    assert s.is_physical()
    post = s.homodyne(1, ObservablePoly(ParamVector(0.3, -0.7, 0.0)), rng)[1]
    assert post.is_physical()


# --- homodyne --------------------------------------------------------------

def test_vacuum_homodyne_statistics():
    rng = np.random.default_rng(7)
    n = 10**5
    x = make_squeezed_vacuum(1.0, backend="fock", cutoff=20).sample_outcomes(0, n, rng=rng)
    se_mean = np.sqrt(0.5 / n)
    se_var = 0.5 * np.sqrt(2 / (n - 1))
    assert abs(x.mean()) < 3 * se_mean
    assert abs(x.var(ddof=1) - 0.5) < 3 * se_var


def test_gaussian_vacuum_homodyne_statistics():
    rng = np.random.default_rng(8)
    vals = np.array([make_squeezed_vacuum(1.0).homodyne(0, rng=rng)[0] for _ in range(20000)])
    assert abs(vals.mean()) < 3 * np.sqrt(0.5 / vals.size)


def test_quadratic_phase_equals_sheared_observable():
    # e^{isq^2/2}|psi> measured in p  vs  |psi> measured in p + s q
    s_ = 0.6
    prep = P("Z(0.2)@0 X(0.4)@0")
    rng = np.random.default_rng(11)
    fock = FockState.squeezed_vacuum(0.7, 40).apply_word(prep)
    a = fock.apply_word(P(f"Dq(0, {s_}, 0)@0")).sample_outcomes(0, 10**4, rng=rng)
    gauss = GaussianState.squeezed_vacuum(0.7).apply_word(prep)
    b = np.array([gauss.homodyne(0, ObservablePoly(ParamVector(0, s_, 0)), rng)[0] for _ in range(10**4)])
    assert stats.ks_2samp(a, b).pvalue > 0.01


def test_fock_quadratic_observable_density_normalized():
    s = FockState.squeezed_vacuum(0.8, 30)
    obs = ObservablePoly(ParamVector(0.1, 0.2, 0.3))
    grid = s._grid(0)
    assert np.trapezoid(s.outcome_density(0, grid, obs), grid) == pytest.approx(1.0, abs=1e-6)


def test_gaussian_rejects_quadratic_observable():
    with pytest.raises(UnsupportedObservable):
        make_squeezed_vacuum(0.5).homodyne(0, ObservablePoly(ParamVector(0, 0, 1.0)))


def test_conditional_covariance_independent_of_value():
    s = _random_gaussian_state(np.random.default_rng(5), 3)
    obs = ObservablePoly(ParamVector(0.1, 0.4, 0.0))
    c1 = s.project(0, -1.3, obs)[0].cov
    c2 = s.project(0, 2.7, obs)[0].cov
    np.testing.assert_allclose(c1, c2, atol=1e-12)


def test_homodyne_removes_mode_and_normalizes():
    rng = np.random.default_rng(2)
    s = make_squeezed_vacuum(0.8, backend="fock", cutoff=25, n_modes=2).apply_word(P("CZ@0,1"))
    out = homodyne(s, 0, rng=rng)
    assert out.post_state.n_modes == 1
    assert out.post_state.norm == pytest.approx(1.0, abs=1e-9)
    g = make_squeezed_vacuum(0.8, n_modes=2).apply_word(P("CZ@0,1"))
    assert homodyne(g, 1, rng=rng).post_state.n_modes == 1


def test_fock_conditioning_matches_gaussian():
    word = P("CZ@0,1")
    f = make_squeezed_vacuum(0.8, backend="fock", cutoff=40, n_modes=2).apply_word(word)
    g = make_squeezed_vacuum(0.8, n_modes=2).apply_word(word)
    pf, df = f.project(0, 0.7)
    pg, dg = g.project(0, 0.7)
    assert df == pytest.approx(dg, rel=1e-4)
    mean, cov = pf.quadrature_moments()
    np.testing.assert_allclose(mean, pg.mean, atol=1e-4)
    np.testing.assert_allclose(cov, pg.cov, atol=1e-4)


# --- fidelity / densities --------------------------------------------------

def test_fidelity_basics():
    s = FockState.squeezed_vacuum(0.7, 20)
    assert fidelity(s, s) == pytest.approx(1.0)
    e0 = FockState.from_vector(np.eye(20)[0])
    e1 = FockState.from_vector(np.eye(20)[1])
    assert fidelity(e0, e1) == 0.0
    with pytest.raises(ShapeMismatch):
        fidelity(s, FockState.squeezed_vacuum(0.7, 21))


def test_fidelity_closed_form_overlap():
    omega = 0.9
    closed = 2 * omega / (1 + omega**2)
    f = fidelity(FockState.vacuum([30]), FockState.squeezed_vacuum(omega, 30))
    assert f == pytest.approx(closed, abs=1e-3)
    g = fidelity(make_squeezed_vacuum(1.0), make_squeezed_vacuum(omega))
    assert g == pytest.approx(closed, abs=1e-12)


def test_reduced_density_product_and_entangled():
    a = FockState.squeezed_vacuum(0.7, 15)
    b = FockState.squeezed_vacuum(0.9, 15)
    rho = a.tensor(b).reduced_density([0])
    np.testing.assert_allclose(rho, np.outer(a.amps, a.amps.conj()), atol=1e-12)
    ent = a.tensor(b).apply_word(P("CZ@0,1")).reduced_density([1])
    assert np.trace(ent).real == pytest.approx(1.0, abs=1e-9)
    assert np.min(np.linalg.eigvalsh(ent)) > -1e-12
    assert np.trace(ent @ ent).real < 0.99


def test_disconnector():
    # CZ(|psi> (x) |s>_q) ~ (Z(s)|psi>) (x) |s>_q with a squeezing factor of 10 on the ancilla
    s = 0.5
    psi = FockState.squeezed_vacuum(0.8, 30).apply_word(P("Dq(0, 0.2, 0)@0 Z(0.3)@0 X(0.4)@0"))
    anc = FockState.squeezed_vacuum(0.1, 450).apply_word(P(f"X({s})@0 F@0"))
    rho = psi.tensor(anc).apply_word(P("CZ@0,1")).reduced_density([0])
    v = psi.apply_word(P(f"Z({s})@0")).amps
    assert (v.conj() @ rho @ v).real >= 0.99


def test_trace_distance_cases():
    rho = np.diag([0.3, 0.7])
    assert trace_distance(rho, rho) == 0.0
    assert trace_distance(np.diag([1.0, 0]), np.diag([0, 1.0])) == pytest.approx(1.0)
    assert trace_distance(np.eye(2) / 2, np.diag([1.0, 0])) == pytest.approx(0.5)
    with pytest.raises(ShapeMismatch):
        trace_distance(np.eye(2), np.eye(3))


# --- serialization ---------------------------------------------------------

def test_serialization_roundtrip(tmp_path):
    g = _random_gaussian_state(np.random.default_rng(4), 2)
    g2 = loads_state(dumps_state(g))
    np.testing.assert_array_equal(g2.cov, g.cov)
    np.testing.assert_array_equal(g2.mean, g.mean)
    f = make_squeezed_vacuum(0.8, backend="fock", cutoff=12, n_modes=2).apply_word(P("CZ@0,1"))
    blob = dumps_state(f, omega=0.8)
    header = blob.split(b"\n", 1)[0]
    assert b'"backend": "fock"' in header and b'"omega": 0.8' in header
    f2 = loads_state(blob)
    np.testing.assert_array_equal(f2.amps, f.amps)
