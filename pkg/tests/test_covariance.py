import numpy as np
import pytest

from ncphase.covariance import (
    CovarianceState,
    certify,
    conjugated_certify,
    invariance_check,
    rsup2_residual,
    rsup4_residual,
    scaling_psd,
    transform,
)
from ncphase.darboux import build_map, compose_pomega, toy_map
from ncphase.errors import FormMismatch, NotOmegaSymplectic, NotSymmetric, ShapeMismatch
from ncphase.oscillator import FockState, ground_sigma_standard, sigma_extended
from ncphase.phase_space_algebra import DeformationParams, build_form, random_symplectic, standard_form

from conftest import interleave, omega_symplectic, random_spd

TOY = DeformationParams(hbar=1.0, theta=0.5, eta=-0.5, g=np.sqrt(1.25), f=1.0)
SAT = np.sqrt(1.25) / 2


def toy_ground(m_omega=1.0):
    return sigma_extended(FockState(0, 0, m_omega, 1.0, 0.5))


def test_state_validation():
    form = standard_form(2)
    with pytest.raises(ShapeMismatch):
        CovarianceState(np.eye(2), form)
    with pytest.raises(NotSymmetric):
        CovarianceState(np.triu(np.ones((4, 4))), form)
    with pytest.raises(ShapeMismatch):
        CovarianceState(np.eye(4), form, means=np.zeros(3))


@pytest.mark.parametrize("g", [1.0, 0.3, 2.5])
def test_standard_vacuum_saturates(g):
    rep = certify(CovarianceState(0.5 * g * np.eye(4), standard_form(2, g)))
    assert rep.psd_ok and rep.sigma_pd_ok and rep.det_ok
    assert abs(rep.min_hermitian_eigenvalue) <= 1e-12


def test_toy_ground_saturates():
    state = CovarianceState(SAT * np.eye(4), build_form(TOY))
    rep = certify(state)
    assert rep.psd_ok
    assert abs(rep.min_hermitian_eigenvalue) <= 1e-10
    np.testing.assert_allclose(toy_ground().sigma, state.sigma, atol=1e-15)


def test_scaled_below_saturation_violates():
    rep = certify(CovarianceState(0.9 * SAT * np.eye(4), build_form(TOY)))
    assert not rep.psd_ok
    assert rep.min_hermitian_eigenvalue < 0
    assert rep.sigma_pd_ok


def test_hermitian_eigenvalues_real(rng):
    form = build_form(DeformationParams(hbar=1.0, theta=0.4, eta=-0.4))
    for _ in range(50):
        H = CovarianceState(random_spd(rng, 4), form).hermitian
        assert np.max(np.abs(np.linalg.eigvals(H).imag)) <= 1e-12


def test_transform_identity_map():
    state = CovarianceState(np.diag([1.0, 2.0, 3.0, 4.0]), standard_form(2))
    out = transform(state, build_map(DeformationParams(hbar=1.0)))
    np.testing.assert_array_equal(out.sigma, state.sigma)


def test_transform_toy_matches_closed_form():
    hbar, theta = 1.0, 0.5
    l1, l2 = 0.279509, 1.118034
    dmap = toy_map(hbar, theta)
    # interleaved (q1, p1, q2, p2) layout diag(l1, l2, l1, l2)
    sigma_j = interleave(np.diag([l1, l2, l1, l2]))
    out = transform(CovarianceState(sigma_j, standard_form(2, dmap.g)), dmap)
    c2 = hbar**2 + theta**2
    off = (l2 - l1) * hbar * theta / c2
    d1 = (hbar**2 * l2 + theta**2 * l1) / c2
    d2 = (theta**2 * l2 + hbar**2 * l1) / c2
    expected = np.array(
        [[l1, 0, 0, 0], [0, d1, off, 0], [0, off, d2, 0], [0, 0, 0, l2]]
    )
    np.testing.assert_allclose(interleave(out.sigma), expected, atol=1e-12)
    assert off == pytest.approx(0.335410, abs=1e-6)


def test_transform_requires_standard_form():
    state = CovarianceState(np.eye(4), build_form(TOY))
    with pytest.raises(FormMismatch):
        transform(state, toy_map(1.0, 0.5))


@pytest.mark.parametrize(
    "args,expected",
    [((0.5, 0.5, 0.0, 1.0), 0.0), ((1.0, 1.0, 0.0, 1.0), 0.75), ((0.4, 0.4, 0.3, 1.0), -0.18)],
)
def test_rsup2(args, expected):
    assert rsup2_residual(*args) == pytest.approx(expected, abs=1e-15)


def test_rsup2_matches_determinant(rng):
    for _ in range(20):
        s = random_spd(rng, 2)
        g = rng.uniform(0.2, 2)
        det = np.linalg.det(s + 0.5j * g * np.array([[0, 1], [-1, 0]])).real
        assert rsup2_residual(s[0, 0], s[1, 1], s[0, 1], g) == pytest.approx(det, abs=1e-12)


def test_rsup4_examples():
    c2 = 1.25
    v = np.sqrt(c2) / 2
    assert abs(rsup4_residual(v, v, v, v, c2)) <= 1e-15
    assert abs(rsup4_residual(0.3125, 1.0, 0.3125, 1.0, c2)) <= 1e-15
    assert rsup4_residual(1, 1, 1, 1, 1.0) == pytest.approx(0.5625)


@pytest.mark.parametrize("hbar", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("theta", [0.0, 0.5, 1.3])
@pytest.mark.parametrize("m_omega", [0.5, 1.0, 2.0, 5.0])
def test_rsup4_ground_state_sweep(hbar, theta, m_omega):
    st = FockState(0, 0, m_omega, hbar, theta)
    s = np.diag(ground_sigma_standard(st).sigma)
    assert abs(rsup4_residual(s[0], s[2], s[1], s[3], st.c2)) <= 1e-12
    assert abs(certify(sigma_extended(st)).min_hermitian_eigenvalue) <= 1e-9


def test_rsup4_matches_determinant_for_diagonal_states(rng):
    c2 = 1.25
    form = standard_form(2, np.sqrt(c2))
    for _ in range(20):
        q1, q2, p1, p2 = rng.uniform(0.2, 2, size=4)
        det = np.linalg.det(CovarianceState(np.diag([q1, q2, p1, p2]), form).hermitian).real
        assert rsup4_residual(q1, p1, q2, p2, c2) == pytest.approx(det, abs=1e-12)


def test_invariance_identity_and_toy(rng):
    ident = build_map(DeformationParams(hbar=1.0))
    assert invariance_check(CovarianceState(random_spd(rng, 4), standard_form(2)), ident) == (0.0, 0.0)
    st = FockState(0, 0, 1.0, 1.0, 0.5)
    det_gap, tr_gap = invariance_check(ground_sigma_standard(st), st.darboux)
    assert det_gap <= 1e-10 and tr_gap <= 1e-10
    for _ in range(20):
        state = CovarianceState(random_spd(rng, 4), standard_form(2, st.darboux.g))
        det_gap, tr_gap = invariance_check(state, st.darboux)
        assert det_gap <= 1e-10 * max(1, abs(np.linalg.det(state.hermitian)))
        assert tr_gap <= 1e-10


def test_invariance_for_rescaled_family_map(rng):
    dmap = build_map(DeformationParams(hbar=1.0, theta=0.4, eta=-0.4), orthogonal=True)
    state = CovarianceState(random_spd(rng, 4), standard_form(2, dmap.orthogonal_g))
    det_gap, tr_gap = invariance_check(state, dmap)
    assert det_gap <= 1e-10 * max(1, abs(np.linalg.det(state.hermitian)))
    assert tr_gap <= 1e-10


def test_conjugated_certify_identity():
    state = toy_ground()
    assert conjugated_certify(np.eye(4), state) == certify(state)


def test_conjugated_certify_agrees(rng):
    dmap = toy_map(1.0, 0.5)
    good = toy_ground()
    bad = good.with_sigma(0.9 * good.sigma)
    for _ in range(20):
        P = compose_pomega(dmap, random_symplectic(2, rng))
        assert certify(good).psd_ok and conjugated_certify(P, good).psd_ok
        assert not certify(bad).psd_ok and not conjugated_certify(P, bad).psd_ok


def test_conjugated_certify_requires_omega_symplectic():
    with pytest.raises(NotOmegaSymplectic):
        conjugated_certify(2 * np.eye(4), toy_ground())


def test_psd_verdict_invariant_under_sp_omega(rng):
    form = build_form(DeformationParams(hbar=1.0, theta=0.3, eta=-0.3))
    for _ in range(100):
        state = CovarianceState(random_spd(rng, 4, shift=0.05), form)
        P = omega_symplectic(rng, form)
        rep, conj = certify(state), conjugated_certify(P, state)
        if abs(rep.min_hermitian_eigenvalue) > 1e-6:
            assert rep.psd_ok == conj.psd_ok


def test_scaling_psd():
    state = toy_ground()
    assert scaling_psd(state, 1.0) == certify(state)
    rep = scaling_psd(state, 0.5)
    assert rep.psd_ok and rep.min_hermitian_eigenvalue > 0.1
    assert scaling_psd(state, 1e-300).min_hermitian_eigenvalue == pytest.approx(SAT)
    with pytest.raises(ValueError):
        scaling_psd(state, 0.0)


def test_psd_implies_sigma_pd_on_random_states(rng):
    for params in (
        DeformationParams(hbar=1.0, theta=0.4, eta=-0.4),
        DeformationParams(hbar=1.0, theta=0.4, eta=0.4),
    ):
        form = build_form(params)
        certified = 0
        for _ in range(200):
            rep = certify(CovarianceState(random_spd(rng, 4, shift=0.0) * rng.uniform(0.1, 3), form))
            if rep.psd_ok:
                certified += 1
                assert rep.sigma_pd_ok
        assert certified > 20
