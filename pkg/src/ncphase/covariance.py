"""Covariance matrices paired with a phase-space form, and their physicality tests.

A state is physical (satisfies the Robertson-Schroedinger relation) when the
Hermitian matrix ``Sigma + (i/2) Omega`` is positive semi-definite.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .darboux import DarbouxMap
from .errors import (
    FormMismatch,
    NotOmegaSymplectic,
    NotOrthogonalDarboux,
    NotSymmetric,
    ShapeMismatch,
)
from .phase_space_algebra import DEFAULT_TOL, PhaseSpaceForm, scaled_tol


@dataclass(frozen=True, eq=False)
class CovarianceState:
    """Symmetric second moments ``sigma`` together with the form they live in."""

    sigma: np.ndarray
    form: PhaseSpaceForm
    means: Optional[np.ndarray] = None

    def __post_init__(self):
        sigma = np.asarray(self.sigma, dtype=float)
        if sigma.ndim != 2 or sigma.shape != self.form.Omega.shape:
            raise ShapeMismatch(f"sigma has shape {sigma.shape}, form has {self.form.Omega.shape}")
        if np.linalg.norm(sigma - sigma.T) > scaled_tol(DEFAULT_TOL, sigma):
            raise NotSymmetric("sigma is not symmetric within tolerance")
        object.__setattr__(self, "sigma", sigma)
        if self.means is not None:
            means = np.asarray(self.means, dtype=float)
            if means.shape != (sigma.shape[0],):
                raise ShapeMismatch(f"means must have length {sigma.shape[0]}")
            object.__setattr__(self, "means", means)

    @property
    def n(self) -> int:
        return self.form.n

    @property
    def hermitian(self) -> np.ndarray:
        """``Sigma + (i/2) Omega``."""
        return self.sigma + 0.5j * self.form.Omega

    def with_sigma(self, sigma) -> "CovarianceState":
        return CovarianceState(sigma, self.form, self.means)


@dataclass(frozen=True)
class CertificationReport:
    psd_ok: bool
    sigma_pd_ok: bool
    det_ok: bool
    min_hermitian_eigenvalue: float
    min_sigma_eigenvalue: float
    rsup_det: float
    hermiticity_residual: float
    tol: float
    atol: float

    def as_dict(self) -> dict:
        return asdict(self)


def _certify_matrix(sigma: np.ndarray, Omega: np.ndarray, tol: float) -> CertificationReport:
    H = sigma + 0.5j * Omega
    herm_res = float(np.linalg.norm(H - H.conj().T))
    atol = scaled_tol(tol, sigma, Omega)
    ev = np.linalg.eigvalsh(H)
    sev = np.linalg.eigvalsh(sigma)
    det = float(np.prod(ev))
    det_scale = max(1.0, float(np.max(np.abs(ev)))) ** (len(ev) - 1)
    return CertificationReport(
        psd_ok=bool(ev[0] >= -atol),
        sigma_pd_ok=bool(sev[0] > atol),
        det_ok=bool(det >= -atol * det_scale),
        min_hermitian_eigenvalue=float(ev[0]),
        min_sigma_eigenvalue=float(sev[0]),
        rsup_det=det,
        hermiticity_residual=herm_res,
        tol=tol,
        atol=atol,
    )


def certify(state: CovarianceState, tol: float = DEFAULT_TOL) -> CertificationReport:
    """Check ``Sigma + (i/2) Omega >= 0``, ``Sigma > 0`` and ``det >= 0``.

    The determinant is taken as the product of the (real) Hermitian
    eigenvalues, so ``rsup_det`` is exactly real.
    """
    return _certify_matrix(state.sigma, state.form.Omega, tol)


def transform(stateJ: CovarianceState, dmap: DarbouxMap, tol: float = DEFAULT_TOL) -> CovarianceState:
    """Push a standard-algebra covariance through a Darboux map: ``M Sigma M^T``."""
    Omega0 = dmap.g * stateJ.form.J
    if stateJ.form.dim != dmap.M.shape[0]:
        raise ShapeMismatch("state and map dimensions differ")
    if np.linalg.norm(stateJ.form.Omega - Omega0) > scaled_tol(tol, Omega0):
        raise FormMismatch(f"source state must carry the standard form {dmap.g:g} J")
    M = dmap.M
    means = None if stateJ.means is None else M @ stateJ.means
    sigma = M @ stateJ.sigma @ M.T
    return CovarianceState(0.5 * (sigma + sigma.T), dmap.target_form, means)


def rsup2_residual(var_q: float, var_p: float, cov: float, g: float) -> float:
    """``Var Q Var P - Cov^2 - g^2/4``; nonnegative when the 2D relation holds."""
    return var_q * var_p - cov**2 - g**2 / 4


def rsup4_residual(var_q1: float, var_p1: float, var_q2: float, var_p2: float, c2: float) -> float:
    """Four-dimensional oscillator form of the uncertainty relation, ``c2 = hbar^2 + theta^2``."""
    x1, x2 = var_q1 * var_p1, var_q2 * var_p2
    return x1 * x2 - 0.25 * c2 * (x1 + x2) + c2**2 / 16


def invariance_check(stateJ: CovarianceState, dmap: DarbouxMap, tol: float = DEFAULT_TOL):
    """Determinant and trace gaps between ``Cov_Omega`` and ``Cov_J``.

    Uses the special orthogonal representative of the map. Both gaps vanish
    when that representative satisfies the Darboux relation with the state's
    own scale ``g``.

    Returns:
        tuple: ``(|det Cov_Omega - det Cov_J|, |tr Cov_Omega - tr Cov_J|)``.
    """
    if dmap.M_orthogonal is None:
        raise NotOrthogonalDarboux("invariance check needs a special orthogonal map")
    R = dmap.M_orthogonal
    if stateJ.sigma.shape != R.shape:
        raise ShapeMismatch("state and map dimensions differ")
    cov_j = stateJ.hermitian
    cov_o = R @ stateJ.sigma @ R.T + 0.5j * dmap.target_form.Omega
    det_gap = abs(np.linalg.det(cov_o) - np.linalg.det(cov_j))
    tr_gap = abs(np.trace(cov_o) - np.trace(cov_j))
    return float(det_gap), float(tr_gap)


def conjugated_certify(P, state: CovarianceState, tol: float = DEFAULT_TOL) -> CertificationReport:
    """Certify ``P^T Sigma P + (i/2) Omega`` for an omega-symplectic ``P``."""
    P = np.asarray(P, dtype=float)
    Omega = state.form.Omega
    if P.shape != Omega.shape:
        raise ShapeMismatch(f"P has shape {P.shape}, form has {Omega.shape}")
    if np.linalg.norm(P.T @ Omega @ P - Omega) > scaled_tol(tol, Omega) * max(1.0, np.linalg.norm(P, 2)) ** 2:
        raise NotOmegaSymplectic("P does not preserve Omega")
    return _certify_matrix(P.T @ state.sigma @ P, Omega, tol)


def scaling_psd(state: CovarianceState, s: float, tol: float = DEFAULT_TOL) -> CertificationReport:
    """Certify ``Sigma + (i s / 2) Omega``; holds for all ``s`` in (0, 1] once it holds at 1."""
    if not 0 < s <= 1:
        raise ValueError(f"s must lie in (0, 1], got {s}")
    return _certify_matrix(state.sigma, s * state.form.Omega, tol)
