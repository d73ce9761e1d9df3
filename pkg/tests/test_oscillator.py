import io
import math

import numpy as np
import pytest

from ncphase.covariance import certify
from ncphase.errors import BoundViolated, NotGroundState, QuadratureDiverged
from ncphase.oscillator import (
    FockState,
    QuadratureRule,
    WignerSample,
    energy,
    ground_sigma_standard,
    laguerre,
    moments_quadrature,
    normalization,
    pullback_moments,
    sample_wigner,
    sigma_extended,
    wigner_bound,
    wigner_bound_check,
    wigner_fock,
    wigner_grid,
    wigner_z,
    write_grid_csv,
)

from conftest import interleave


def test_laguerre_low_orders():
    x = np.linspace(-1, 5, 13)
    np.testing.assert_allclose(laguerre(0, x), 1.0)
    np.testing.assert_allclose(laguerre(1, x), 1 - x)
    np.testing.assert_allclose(laguerre(2, x), 1 - 2 * x + x**2 / 2)
    assert laguerre(3, 1.5) == pytest.approx(1 - 4.5 + 3 * 1.5**2 / 2 - 1.5**3 / 6, abs=1e-12)
    assert laguerre(7, 0.0) == 1.0
    with pytest.raises(ValueError):
        laguerre(-1, 0.0)


def test_laguerre_matches_numpy():
    x = np.linspace(0, 20, 41)
    for k in (5, 12, 30):
        coef = np.zeros(k + 1)
        coef[k] = 1
        np.testing.assert_allclose(laguerre(k, x), np.polynomial.laguerre.lagval(x, coef), rtol=1e-9, atol=1e-9)


def test_fock_state_validation():
    with pytest.raises(ValueError):
        FockState(-1, 0)
    with pytest.raises(ValueError):
        FockState(0, 0, m_omega=0.0)
    st = FockState(0, 0, 2.0, 1.0, 0.5)
    assert st.c == pytest.approx(math.sqrt(1.25))
    assert st.alpha2 == pytest.approx(math.sqrt(1.25) / 2)
    assert st.params.f == 1.0 and st.params.eta == -0.5


def test_wigner_origin_values():
    g = FockState(0, 0, 1.0, 1.0, 0.5)
    assert wigner_fock(g, np.zeros(2), np.zeros(2)) == pytest.approx(1 / (math.pi**2 * 1.25), rel=1e-14)
    assert wigner_fock(g, np.zeros(2), np.zeros(2)) == pytest.approx(0.081057, abs=1e-6)
    odd = FockState(1, 0, 1.0, 1.0, 0.5)
    assert wigner_fock(odd, np.zeros(2), np.zeros(2)) == pytest.approx(-1 / (math.pi**2 * 1.25), rel=1e-14)
    assert wigner_z(FockState(1, 1, 1.0, 1.0, 0.5), np.zeros(4)) > 0


def test_ground_state_is_gaussian():
    st = FockState(0, 0, 2.0, 1.0, 0.5)
    sigma = ground_sigma_standard(st).sigma
    inv = np.linalg.inv(sigma)
    rng = np.random.default_rng(1)
    for z in rng.normal(size=(10, 4)):
        expected = math.exp(-0.5 * z @ inv @ z) / (4 * math.pi**2 * math.sqrt(np.linalg.det(sigma)))
        assert wigner_z(st, z) == pytest.approx(expected, rel=1e-12)


def test_normalization_sign():
    assert normalization(FockState(2, 1)) < 0 < normalization(FockState(2, 2))


@pytest.mark.parametrize(
    "m_omega,vq,vp", [(1.0, 0.559017, 0.559017), (2.0, 0.279509, 1.118034)]
)
def test_ground_variances(m_omega, vq, vp):
    s = ground_sigma_standard(FockState(0, 0, m_omega, 1.0, 0.5)).sigma
    np.testing.assert_allclose(np.diag(s), [vq, vq, vp, vp], atol=1e-6)


def test_commutative_vacuum():
    s = ground_sigma_standard(FockState(0, 0, 1.0, 1.0, 0.0)).sigma
    np.testing.assert_allclose(s, 0.5 * np.eye(4))


def test_ground_only():
    with pytest.raises(NotGroundState):
        ground_sigma_standard(FockState(1, 0))
    with pytest.raises(NotGroundState):
        sigma_extended(FockState(0, 2))


def test_sigma_extended_values():
    np.testing.assert_allclose(
        sigma_extended(FockState(0, 0, 1.0, 1.0, 0.5)).sigma, 0.559017 * np.eye(4), atol=1e-6
    )
    s = interleave(sigma_extended(FockState(0, 0, 2.0, 1.0, 0.5)).sigma)
    assert s[1, 2] == pytest.approx(0.335410, abs=1e-6)
    assert s[2, 1] == s[1, 2]


@pytest.mark.parametrize("m_omega", [0.5, 1.0, 2.0, 5.0])
def test_ground_state_saturation(m_omega):
    rep = certify(sigma_extended(FockState(0, 0, m_omega, 1.0, 0.5)))
    assert rep.psd_ok and abs(rep.min_hermitian_eigenvalue) <= 1e-9 and abs(rep.rsup_det) <= 1e-9


def test_energy_levels():
    assert energy(FockState(0, 0, 1.0, 1.0, 0.0)).energy == pytest.approx(1.0)
    e0 = energy(FockState(0, 0, 1.0, 1.0, 0.5))
    assert e0.min_section_area == pytest.approx(7.024814, abs=1e-6)
    assert e0.section_area == e0.min_section_area
    assert energy(FockState(1, 2, 1.0, 1.0, 0.5)).energy / e0.energy == pytest.approx(4.0)


@pytest.mark.parametrize("n1", range(4))
@pytest.mark.parametrize("n2", range(4))
def test_quadrature_moments(n1, n2):
    st = FockState(n1, n2, 2.0, 1.0, 0.5)
    mom = moments_quadrature(st)
    ground = np.diag(ground_sigma_standard(FockState(0, 0, 2.0, 1.0, 0.5)).sigma)
    expected = np.diag(ground * np.array([2 * n1 + 1, 2 * n2 + 1, 2 * n1 + 1, 2 * n2 + 1]))
    assert abs(mom.norm - 1) <= 1e-8
    np.testing.assert_allclose(mom.means, 0, atol=1e-8)
    np.testing.assert_allclose(mom.sigma, expected, atol=1e-8)


def test_quadrature_ground_at_unit_m_omega():
    mom = moments_quadrature(FockState(0, 0, 1.0, 1.0, 0.5))
    np.testing.assert_allclose(mom.sigma, 0.559017 * np.eye(4), atol=1e-6)


def test_quadrature_divergence_detected():
    with pytest.raises(QuadratureDiverged):
        moments_quadrature(FockState(0, 0), QuadratureRule(nodes=8, extent=0.5))


@pytest.mark.parametrize("m_omega", [1.0, 2.0])
def test_pullback_moments(m_omega):
    st = FockState(0, 0, m_omega, 1.0, 0.5)
    mom = pullback_moments(st, rule=QuadratureRule(nodes=32))
    assert abs(mom.norm - 1) <= 1e-8
    np.testing.assert_allclose(mom.sigma, sigma_extended(st).sigma, atol=1e-8)


def test_wigner_bound_check():
    rng = np.random.default_rng(7)
    for n1 in range(4):
        for n2 in range(4):
            st = FockState(n1, n2, 1.5, 1.0, 0.5)
            pts = rng.normal(scale=2.0, size=(200, 4))
            samples = sample_wigner(st, pts)
            assert wigner_bound_check(st, samples)
            assert max(abs(s.value) for s in samples) <= 1 / (math.pi * st.c) ** 2 + 1e-15


def test_wigner_bound_violation_raises():
    st = FockState(0, 0)
    bad = WignerSample(np.zeros(2), np.zeros(2), 2 * wigner_bound(st))
    with pytest.raises(BoundViolated):
        wigner_bound_check(st, [bad])


def test_only_ground_state_is_nonnegative():
    ground = FockState(0, 0, 1.0, 1.0, 0.5)
    _, rows = wigner_grid(ground, 41, 6.0, "q1p1")
    assert rows[:, -1].min() >= 0
    _, rows = wigner_grid(ground, 9, 4.0, None)
    assert rows[:, -1].min() >= 0
    _, rows = wigner_grid(FockState(1, 0, 1.0, 1.0, 0.5), 41, 6.0, "q1p1")
    assert rows[:, -1].min() < 0


@pytest.mark.parametrize("plane", ["q1p1", "q2p2", "q1q2", "p1p2"])
def test_grid_slices(plane):
    st = FockState(0, 1)
    header, rows = wigner_grid(st, 5, 2.0, plane)
    assert header == [plane[:2], plane[2:], "w"]
    assert rows.shape == (25, 3)


def test_grid_full_and_base():
    st = FockState(0, 0)
    header, rows = wigner_grid(st, 4, 2.0, None)
    assert header == ["q1", "q2", "p1", "p2", "w"]
    assert rows.shape == (4**4, 5)
    _, rows = wigner_grid(st, 3, 1.0, "q1p1", base=[0, 0.5, 0, 0.25])
    assert rows[4, -1] == pytest.approx(wigner_z(st, [0, 0.5, 0, 0.25]))
    with pytest.raises(ValueError):
        wigner_grid(st, 3, 1.0, "q1q1")
    with pytest.raises(ValueError):
        wigner_grid(st, 3, 1.0, "q1p1", base=[0, 0])


def test_grid_csv():
    header, rows = wigner_grid(FockState(0, 0), 3, 1.0, "q1p1")
    buf = io.StringIO()
    write_grid_csv(buf, header, rows)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "q1,p1,w"
    assert len(lines) == 10
    back = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
    np.testing.assert_array_equal(back, rows)
