"""Symplectic spectra and Williamson normal forms relative to a deformed form ``Omega``."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .covariance import CovarianceState
from .errors import NoConformalScale, NotPositiveDefinite, SpectrumPairingError
from .phase_space_algebra import DEFAULT_TOL, skew_canonical, standard_j

PAIRING_RTOL = 1e-8


@dataclass(frozen=True, eq=False)
class SymplecticSpectrum:
    """Symplectic eigenvalues ``nu_1 >= ... >= nu_n > 0`` with ``det(Omega Sigma +- i nu) = 0``."""

    nus: np.ndarray
    form_scale: Optional[float]
    source_dim: int

    @property
    def nu_max(self) -> float:
        return float(self.nus[0])

    @property
    def nu_min(self) -> float:
        return float(self.nus[-1])


class FormKind(enum.Enum):
    OMEGA_PRESERVING = "OmegaPreserving"
    SCALED_J = "ScaledJ"


@dataclass(frozen=True, eq=False)
class NormalForm:
    """``P^T Sigma P = diag(W, W)`` with ``P^T Omega P`` equal to ``Omega`` or ``c J``."""

    P: np.ndarray
    W: np.ndarray
    achieved_form: FormKind
    sigma_residual: float
    form_residual: float
    conformal_scale: float


def _sqrt_pd(A: np.ndarray, tol: float):
    w, U = np.linalg.eigh(0.5 * (A + A.T))
    if w[0] <= tol * max(1.0, abs(w[-1])):
        raise NotPositiveDefinite(f"matrix is not positive definite (min eigenvalue {w[0]:.3g})")
    return U, w


def omega_spectrum(state: CovarianceState, tol: float = DEFAULT_TOL) -> SymplecticSpectrum:
    """Symplectic spectrum of ``Sigma`` with respect to ``Omega``.

    ``Omega Sigma`` is similar to the skew matrix ``K = Sigma^(1/2) Omega Sigma^(1/2)``,
    whose spectrum is read off the Hermitian matrix ``i K``; its eigenvalues
    come in exact ``+-nu`` pairs.
    """
    U, w = _sqrt_pd(state.sigma, tol)
    root = (U * np.sqrt(w)) @ U.T
    K = root @ state.form.Omega @ root
    ev = np.linalg.eigvalsh(1j * 0.5 * (K - K.T))
    n = state.n
    pos = ev[n:][::-1]
    neg = -ev[:n]
    if np.any(np.abs(pos - neg) > PAIRING_RTOL * max(1.0, float(pos[0]))) or pos[-1] <= 0:
        raise SpectrumPairingError(f"eigenvalues do not pair: {ev}")
    nus = 0.5 * (pos + neg)
    return SymplecticSpectrum(nus, state.form.conformal_scale, state.form.dim)


def _darboux_frame(Jp: np.ndarray) -> np.ndarray:
    """Orthogonal ``R`` with ``R^T J' R = J`` for an orthogonal skew ``J'``.

    Pairs each new unit vector ``u`` with ``-J' u``; the span of each pair is
    ``J'``-invariant, so the orthogonal complement stays invariant too.
    """
    m = Jp.shape[0]
    n = m // 2
    qs, ps = [], []
    basis = []
    for e in np.eye(m):
        if len(qs) == n:
            break
        v = e.copy()
        for b in basis:
            v -= (b @ v) * b
        for b in basis:  # second pass for stability
            v -= (b @ v) * b
        norm = np.linalg.norm(v)
        if norm < 1e-8:
            continue
        u = v / norm
        p = -Jp @ u
        p /= np.linalg.norm(p)
        qs.append(u)
        ps.append(p)
        basis.extend([u, p])
    return np.column_stack(qs + ps)


def standard_williamson(B: np.ndarray, tol: float = DEFAULT_TOL):
    """Williamson form for the standard ``J``.

    Returns:
        tuple: ``(S, W)`` with ``S^T B S = diag(W, W)``, ``S^T J S = J`` and
        ``W`` sorted in descending order.
    """
    U, w = _sqrt_pd(B, tol)
    inv_root = (U / np.sqrt(w)) @ U.T
    n = B.shape[0] // 2
    K = inv_root @ standard_j(n) @ inv_root
    O, lambdas, _ = skew_canonical(0.5 * (K - K.T), tol)
    # ascending lambda means descending W = 1/lambda
    order = np.arange(n)[::-1]
    perm = np.concatenate([2 * order, 2 * order + 1])
    Q = O[:, perm]
    W = 1.0 / lambdas[order]
    S = inv_root @ Q * np.sqrt(np.concatenate([W, W]))
    return S, W


def normal_form(state: CovarianceState, tol: float = DEFAULT_TOL) -> NormalForm:
    """Williamson normal form of ``Sigma`` relative to a conformal ``Omega``.

    With ``c`` the conformal scale, ``R`` an orthogonal frame taking
    ``Omega`` to ``c J`` and ``S`` the standard Williamson matrix of
    ``R^T Sigma R``, ``P = R S`` gives ``P^T Omega P = c J``. When ``Omega``
    is already ``c J`` (take ``R = I``) or the spectrum is isotropic (take
    ``P = R S R^T``) the result preserves ``Omega`` itself. Diagonal entries
    satisfy ``nu_j = c W_j``.

    Raises:
        NoConformalScale: if ``Omega^T Omega`` is not a multiple of the identity.
        NotPositiveDefinite: if ``Sigma`` is not positive definite.
    """
    form = state.form
    c = form.conformal_scale
    if c is None:
        raise NoConformalScale("normal form needs Omega^T Omega = c^2 I")
    Omega = form.Omega
    sigma = state.sigma
    J = standard_j(state.n)
    standard = bool(np.linalg.norm(Omega - c * J) <= tol * c)
    R = np.eye(form.dim) if standard else _darboux_frame(Omega / c)
    S, W = standard_williamson(R.T @ sigma @ R, tol)
    isotropic = bool(np.ptp(W) <= 1e-12 * W[0])
    if standard:
        P, kind, target = S, FormKind.OMEGA_PRESERVING, Omega
    elif isotropic:
        P, kind, target = R @ S @ R.T, FormKind.OMEGA_PRESERVING, Omega
    else:
        P, kind, target = R @ S, FormKind.SCALED_J, c * J
    D = np.diag(np.concatenate([W, W]))
    return NormalForm(
        P=P,
        W=W,
        achieved_form=kind,
        sigma_residual=float(np.linalg.norm(P.T @ sigma @ P - D)),
        form_residual=float(np.linalg.norm(P.T @ Omega @ P - target)),
        conformal_scale=c,
    )


def characteristic_matrix(lam1: float, lam2: float, f: float, theta: float) -> np.ndarray:
    """``(1/2) diag(1/l1, 1/l2, 1/l1, 1/l2) + (i/2)(f J + diag(theta E, -theta E))`` in 4D."""
    E = np.array([[0.0, 1.0], [-1.0, 0.0]])
    Z = np.zeros((2, 2))
    S = np.block([[theta * E, Z], [Z, -theta * E]])
    D = np.diag([1 / lam1, 1 / lam2, 1 / lam1, 1 / lam2])
    return 0.5 * D + 0.5j * (f * standard_j(2) + S)


def hermitian_mu_roots(lam1: float, lam2: float, f: float, theta: float) -> np.ndarray:
    """Closed-form eigenvalues of :func:`characteristic_matrix`, ascending.

    ``mu(+-,+-) = (1/4)(1/l1 + 1/l2 +- sqrt((1/l1 - 1/l2 +- 2f)^2 + 4 theta^2))``;
    continuous through ``l1 = l2``.
    """
    x, y = 1.0 / lam1, 1.0 / lam2
    roots = [
        0.25 * (x + y + s1 * np.sqrt((x - y + s2 * 2 * f) ** 2 + 4 * theta**2))
        for s1 in (1, -1)
        for s2 in (1, -1)
    ]
    return np.sort(np.array(roots))


def quartic_coefficients(lam1: float, lam2: float, f: float, theta: float) -> np.ndarray:
    """Coefficients (highest power first) of ``F_1(mu) F_2(mu) + (theta^2/16)(1/l1 - 1/l2)^2``."""
    c2 = f**2 + theta**2

    def F(lam):
        return np.array([1.0, -1.0 / lam, 0.25 * (1.0 / lam**2 - c2)])

    coeffs = np.polymul(F(lam1), F(lam2))
    coeffs[-1] += theta**2 / 16 * (1 / lam1 - 1 / lam2) ** 2
    return coeffs


def characteristic_quartic(mu, lam1: float, lam2: float, f: float, theta: float):
    """Evaluate ``det(H - mu I)`` as ``F_1(mu) F_2(mu) + (theta^2/16)(1/l1 - 1/l2)^2``.

    ``F_j(mu) = (mu - 1/(2 l_j))^2 - (f^2 + theta^2)/4``; the factored form
    cancels far less than the expanded polynomial near the roots.
    """
    mu = np.asarray(mu, dtype=float)
    c2 = f**2 + theta**2
    F1 = (mu - 0.5 / lam1) ** 2 - 0.25 * c2
    F2 = (mu - 0.5 / lam2) ** 2 - 0.25 * c2
    return F1 * F2 + theta**2 / 16 * (1 / lam1 - 1 / lam2) ** 2


@dataclass(frozen=True)
class MinorChain:
    """Values of ``f^2 + theta^2 <= 1/l1^2 <= 1/(l1 l2) <= 1/l2^2`` and verdicts."""

    values: tuple
    passed: bool
    alternating: Optional[bool]


def minor_chain(lam1: float, lam2: float, f: float, theta: float, tol: float = DEFAULT_TOL) -> MinorChain:
    """Principal-minor chain for the 4D characteristic matrix (requires ``l1 >= l2 > 0``).

    When the chain holds the quartic's coefficients alternate in sign
    (zeros allowed at saturation); ``alternating`` is None otherwise.
    """
    if not lam1 >= lam2 > 0:
        raise ValueError("minor chain needs lam1 >= lam2 > 0")
    vals = (f**2 + theta**2, 1 / lam1**2, 1 / (lam1 * lam2), 1 / lam2**2)
    passed = all(a <= b + tol * max(1.0, abs(b)) for a, b in zip(vals, vals[1:]))
    alternating = None
    if passed:
        coeffs = quartic_coefficients(lam1, lam2, f, theta)
        scale = tol * max(1.0, float(np.max(np.abs(coeffs))))
        signs = np.array([1, -1, 1, -1, 1])
        alternating = bool(np.all(signs * coeffs >= -scale))
    return MinorChain(vals, passed, alternating)
