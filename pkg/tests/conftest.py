import numpy as np
import pytest

from ncphase.phase_space_algebra import standard_j


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


def random_skew(rng, m, scale=1.0):
    A = rng.normal(scale=scale, size=(m, m))
    return A - A.T


def random_spd(rng, m, shift=0.3):
    A = rng.normal(size=(m, m))
    return A @ A.T + shift * np.eye(m)


def omega_symplectic(rng, form, scale=0.4):
    """Random P with P^T Omega P = Omega for a conformal form, built as R S R^T."""
    from ncphase.phase_space_algebra import random_symplectic
    from ncphase.williamson import _darboux_frame

    c = form.conformal_scale
    R = _darboux_frame(form.Omega / c)
    S = random_symplectic(form.n, rng, scale)
    return R @ S @ R.T


def interleave(A):
    """Block (q1, q2, p1, p2) ordering -> interleaved (q1, p1, q2, p2)."""
    perm = [0, 2, 1, 3]
    return A[np.ix_(perm, perm)]


__all__ = ["random_skew", "random_spd", "omega_symplectic", "interleave", "standard_j"]
