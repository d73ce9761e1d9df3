"""Darboux maps ``M`` with ``g M J M^T = Omega`` and the omega-symplectic conjugators they induce."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DegenerateDeformation, NotOrthogonalDarboux, NotSymplectic, ShapeMismatch
from .phase_space_algebra import (
    DEFAULT_TOL,
    DeformationParams,
    PhaseSpaceForm,
    SkewPattern,
    SymplecticClass,
    build_form,
    classify_symplectic,
    commutator_scale,
    standard_j,
)


# block index (q1, q2, p1, p2) -> interleaved index (q1, p1, q2, p2)
INTERLEAVED_FROM_BLOCK = [0, 2, 1, 3]


@dataclass(frozen=True, eq=False)
class DarbouxMap:
    """A linear map from the standard algebra (scale ``g``) to ``target_form``.

    ``M`` is the raw solution and satisfies the Darboux relation exactly.
    ``M_orthogonal`` is ``M / s`` with ``s = det(M)^(1/2n)`` when that
    rescaling lands in ``SO(2n)``; it then satisfies
    ``g s^2 M_orthogonal J M_orthogonal^T = Omega`` instead.
    """

    M: np.ndarray
    g: float
    target_form: PhaseSpaceForm
    residual: float
    a: Optional[float] = None
    b: Optional[float] = None
    c: Optional[float] = None
    d: Optional[float] = None
    M_orthogonal: Optional[np.ndarray] = None
    rescale: float = 1.0

    @property
    def n(self) -> int:
        return self.M.shape[0] // 2

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.M))

    @property
    def special_orthogonal(self) -> bool:
        """True when an SO(4l) representative exists."""
        return self.M_orthogonal is not None

    @property
    def orthogonal_g(self) -> float:
        """Scale ``g'`` with ``g' M_orthogonal J M_orthogonal^T = Omega``."""
        return self.g * self.rescale**2

    def classification(self, tol: float = DEFAULT_TOL) -> SymplecticClass:
        return classify_symplectic(self.M, tol)


def verify_map(M, g: float, form: PhaseSpaceForm) -> float:
    """Frobenius residual ``||g M J M^T - Omega||``; never raises on a large value."""
    M = np.asarray(M, dtype=float)
    if M.shape != form.Omega.shape:
        raise ShapeMismatch(f"M has shape {M.shape}, form has {form.Omega.shape}")
    J = standard_j(form.n)
    return float(np.linalg.norm(g * M @ J @ M.T - form.Omega))


def _orthogonal_representative(M: np.ndarray, tol: float):
    m = M.shape[0]
    det = np.linalg.det(M)
    if det <= 0 or m % 4:
        return None, 1.0
    s = det ** (1.0 / m)
    R = M / s
    if np.linalg.norm(R.T @ R - np.eye(m)) <= tol * m:
        return R, float(s)
    return None, float(s)


def build_map(
    params: DeformationParams,
    a: float = 1.0,
    E: Optional[SkewPattern] = None,
    Eprime: Optional[SkewPattern] = None,
    *,
    n: int = 2,
    orthogonal: bool = False,
    tol: float = DEFAULT_TOL,
) -> DarbouxMap:
    """Build the block Darboux map ``[[a I, b E^T], [c E', I/a]]``.

    Here ``b = theta / (2 g a)`` and ``c = eta a / (2 g)``.

    Args:
        params: deformation parameters (``g`` is the reference scale).
        a: free block parameter, nonzero.
        E, Eprime: skew patterns, default canonical of dimension ``n``.
        orthogonal: demand the SO(4l) family; requires ``a = +-1`` and an
            orthogonal rescaling.

    Raises:
        DegenerateDeformation: if the commutator scale ``f`` vanishes.
        NotOrthogonalDarboux: if ``orthogonal`` is requested but unattainable.
    """
    if a == 0:
        raise ValueError("a must be nonzero")
    if orthogonal and abs(a) != 1:
        raise NotOrthogonalDarboux("the orthogonal family requires a = +1 or -1")
    if E is None:
        E = SkewPattern.canonical(n)
    if Eprime is None:
        Eprime = SkewPattern.canonical(E.n)
    f = commutator_scale(params, E, Eprime)
    if abs(f) <= tol * params.g:
        raise DegenerateDeformation(
            f"f vanishes for theta={params.theta}, eta={params.eta}, g={params.g}"
        )
    form = build_form(params, E, Eprime, tol=tol)
    g = params.g
    b = params.theta / (2 * g * a)
    c = params.eta * a / (2 * g)
    d = 1.0 / a
    k = E.n
    M = np.block([[a * np.eye(k), b * E.T], [c * Eprime.entries, d * np.eye(k)]])
    R, s = _orthogonal_representative(M, tol)
    if orthogonal and R is None:
        raise NotOrthogonalDarboux("rescaled map is not special orthogonal for these parameters")
    return DarbouxMap(M, g, form, verify_map(M, g, form), a, b, c, d, R, s)


def toy_map(hbar: float = 1.0, theta: float = 0.0) -> DarbouxMap:
    """Orthogonal Darboux map of the isotropic non-commutative oscillator.

    It rotates the ``(q_2, p_1)`` plane by ``atan(theta / hbar)`` and links
    ``sqrt(hbar^2 + theta^2) J`` to ``hbar J + diag(theta E, -theta E)``.
    """
    r = float(np.hypot(hbar, theta))
    co, si = hbar / r, theta / r
    # written in interleaved (q1, p1, q2, p2) ordering, then permuted to blocks
    M = np.array(
        [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, co, -si, 0.0],
            [0.0, si, co, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ]
    )
    M = M[np.ix_(INTERLEAVED_FROM_BLOCK, INTERLEAVED_FROM_BLOCK)]
    params = DeformationParams.toy(hbar, theta)
    form = build_form(params)
    return DarbouxMap(M, r, form, verify_map(M, r, form), M_orthogonal=M, rescale=1.0)


def compose_pomega(dmap: DarbouxMap, Ssym, tol: float = DEFAULT_TOL) -> np.ndarray:
    """``P = M S M^T`` with ``M`` the orthogonal Darboux representative.

    ``P`` preserves ``Omega`` by congruence whenever ``S`` is symplectic.
    """
    Ssym = np.asarray(Ssym, dtype=float)
    if Ssym.shape != dmap.M.shape:
        raise ShapeMismatch(f"S has shape {Ssym.shape}, map has {dmap.M.shape}")
    if classify_symplectic(Ssym, tol) is not SymplecticClass.SYMPLECTIC:
        raise NotSymplectic("S does not satisfy S^T J S = J")
    if dmap.M_orthogonal is None:
        raise NotOrthogonalDarboux("map has no special orthogonal representative")
    R = dmap.M_orthogonal
    return R @ Ssym @ R.T
