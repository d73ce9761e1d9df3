"""Isotropic non-commutative harmonic oscillator in four phase-space dimensions.

The reference algebra has scale ``c = sqrt(hbar^2 + theta^2)``; Fock-state
Wigner functions factor over the two modes as
``C exp(-(Z_1 + Z_2)/2) L_{n1}(Z_1) L_{n2}(Z_2)`` with
``Z_i = 2 (Q_i^2 / alpha^2 + alpha^2 P_i^2 / c^2)`` and ``alpha^2 = c / (m omega)``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional, Sequence

import numpy as np

from .covariance import CovarianceState, transform
from .darboux import DarbouxMap, toy_map
from .errors import BoundViolated, NotGroundState, QuadratureDiverged
from .phase_space_algebra import DeformationParams, PhaseSpaceForm, build_form, standard_form

MAX_LAGUERRE_ORDER = 64
AXES = ("q1", "q2", "p1", "p2")
PLANES = ("q1p1", "q2p2", "q1q2", "p1p2")


@dataclass(frozen=True)
class FockState:
    """Energy eigenstate ``(n1, n2)`` of the oscillator; only ``m * omega`` enters."""

    n1: int
    n2: int
    m_omega: float = 1.0
    hbar: float = 1.0
    theta: float = 0.0

    def __post_init__(self):
        if self.n1 < 0 or self.n2 < 0 or int(self.n1) != self.n1 or int(self.n2) != self.n2:
            raise ValueError("quantum numbers must be nonnegative integers")
        if max(self.n1, self.n2) > MAX_LAGUERRE_ORDER:
            raise ValueError(f"quantum numbers are limited to {MAX_LAGUERRE_ORDER}")
        if not self.m_omega > 0:
            raise ValueError("m_omega must be positive")
        if not self.hbar > 0:
            raise ValueError("hbar must be positive")

    @property
    def c2(self) -> float:
        return self.hbar**2 + self.theta**2

    @property
    def c(self) -> float:
        return math.sqrt(self.c2)

    @property
    def alpha2(self) -> float:
        return self.c / self.m_omega

    @property
    def params(self) -> DeformationParams:
        return DeformationParams.toy(self.hbar, self.theta)

    @property
    def form(self) -> PhaseSpaceForm:
        return build_form(self.params)

    @property
    def standard_form(self) -> PhaseSpaceForm:
        return standard_form(2, self.c)

    @property
    def darboux(self) -> DarbouxMap:
        return toy_map(self.hbar, self.theta)

    @property
    def parity(self) -> int:
        return -1 if (self.n1 + self.n2) % 2 else 1

    @property
    def scales(self) -> np.ndarray:
        """Oscillator lengths per axis ``(alpha, alpha, c/alpha, c/alpha)``."""
        a = math.sqrt(self.alpha2)
        return np.array([a, a, self.c / a, self.c / a])


def laguerre(k: int, x):
    """Laguerre polynomial ``L_k(x)`` by the three-term recurrence."""
    if k < 0 or k > MAX_LAGUERRE_ORDER:
        raise ValueError(f"order must lie in [0, {MAX_LAGUERRE_ORDER}]")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if k == 0:
        return prev if prev.ndim else float(prev)
    cur = 1.0 - x
    for j in range(1, k):
        prev, cur = cur, ((2 * j + 1 - x) * cur - j * prev) / (j + 1)
    return cur if cur.ndim else float(cur)


def normalization(state: FockState) -> float:
    """``(-1)^(n1+n2) / (pi^2 c^2)``, from ``int_0^inf exp(-u/2) L_n(u) du = 2 (-1)^n``."""
    return state.parity / (math.pi**2 * state.c2)


def _mode_factor(state: FockState, k: int, Q, P):
    Z = 2.0 * (np.square(Q) / state.alpha2 + state.alpha2 * np.square(P) / state.c2)
    return np.exp(-0.5 * Z) * laguerre(k, Z)


def wigner_fock(state: FockState, Q, P):
    """Wigner function of ``state`` at positions ``Q`` and momenta ``P`` (trailing axis of length 2)."""
    Q = np.asarray(Q, dtype=float)
    P = np.asarray(P, dtype=float)
    w = (
        normalization(state)
        * _mode_factor(state, state.n1, Q[..., 0], P[..., 0])
        * _mode_factor(state, state.n2, Q[..., 1], P[..., 1])
    )
    return w if np.ndim(w) else float(w)


def wigner_z(state: FockState, z):
    """Wigner function at phase-space points ``z = (q1, q2, p1, p2)``."""
    z = np.asarray(z, dtype=float)
    return wigner_fock(state, z[..., :2], z[..., 2:])


def _require_ground(state: FockState):
    if state.n1 or state.n2:
        raise NotGroundState(f"closed-form covariances exist only for (0, 0), got ({state.n1}, {state.n2})")


def ground_sigma_standard(state: FockState) -> CovarianceState:
    """Ground-state covariance in the reference algebra; diagonal, form ``c J``."""
    _require_ground(state)
    var_q = state.c / (2 * state.m_omega)
    var_p = state.m_omega * state.c / 2
    return CovarianceState(np.diag([var_q, var_q, var_p, var_p]), state.standard_form)


def sigma_extended(state: FockState) -> CovarianceState:
    """Ground-state covariance of the deformed algebra, ``M Sigma_J M^T``."""
    _require_ground(state)
    return transform(ground_sigma_standard(state), state.darboux)


class EnergyLevel(NamedTuple):
    energy: float
    section_area: float
    min_section_area: float


def energy(state: FockState) -> EnergyLevel:
    """Level ``omega c (n1 + n2 + 1)`` at unit mass, with conjugate-plane section areas."""
    level = state.n1 + state.n2 + 1
    area0 = 2 * math.pi * state.c
    return EnergyLevel(state.m_omega * state.c * level, area0 * level, area0)


@dataclass(frozen=True)
class QuadratureRule:
    """Tensor Gauss-Legendre rule: ``nodes`` per axis on ``[-extent, extent]``.

    ``extent`` is measured in oscillator lengths (``alpha`` for positions,
    ``c / alpha`` for momenta), where the ground state has standard
    deviation ``1/sqrt(2)``.
    """

    nodes: int = 64
    extent: float = 6.0

    def points(self, half_width: float = 1.0):
        x, w = np.polynomial.legendre.leggauss(self.nodes)
        s = self.extent * half_width
        return s * x, s * w


class Moments(NamedTuple):
    norm: float
    means: np.ndarray
    sigma: np.ndarray


def _central(norm, first, second) -> Moments:
    sigma = second - np.outer(first, first)
    return Moments(float(norm), first, 0.5 * (sigma + sigma.T))


def _check_norm(norm: float):
    if not abs(norm - 1.0) <= 1e-4:
        raise QuadratureDiverged(f"quadrature norm {norm:.8g} deviates from 1")


def moments_quadrature(state: FockState, rule: QuadratureRule = QuadratureRule()) -> Moments:
    """Norm, means and central second moments of the Wigner function by quadrature.

    The tensor grid over ``(Q1, Q2, P1, P2)`` is contracted mode by mode, which
    is exact for the factorised integrand.
    """
    scales = state.scales
    xq, wq = rule.points(scales[0])
    xp, wp = rule.points(scales[2])
    Qg, Pg = np.meshgrid(xq, xp, indexing="ij")
    Wg = np.outer(wq, wp)
    feats = np.stack([np.ones_like(Qg), Qg, Pg])  # 1, Q, P

    tables = []
    for k in (state.n1, state.n2):
        fw = _mode_factor(state, k, Qg, Pg) * Wg
        tables.append(np.einsum("aij,bij,ij->ab", feats, feats, fw))
    T1, T2 = tables
    C = normalization(state)
    norm = C * T1[0, 0] * T2[0, 0]

    # axis -> (mode, feature); z = (q1, q2, p1, p2)
    loc = [(0, 1), (1, 1), (0, 2), (1, 2)]
    first = np.empty(4)
    second = np.empty((4, 4))
    for a, (ma, fa) in enumerate(loc):
        other = tables[1 - ma][0, 0]
        first[a] = C * tables[ma][fa, 0] * other
        for b, (mb, fb) in enumerate(loc):
            if ma == mb:
                second[a, b] = C * tables[ma][fa, fb] * other
            else:
                second[a, b] = C * tables[ma][fa, 0] * tables[mb][fb, 0]
    _check_norm(norm)
    return _central(norm, first, second)


def pullback_moments(
    state: FockState, dmap: Optional[DarbouxMap] = None, rule: QuadratureRule = QuadratureRule()
) -> Moments:
    """Moments of ``W_Omega(z) = W_J(M^-1 z)`` by a full 4D tensor grid in ``z``.

    Box half-widths are ``extent`` times the row norms of ``M diag(scales)``,
    so the box contains the image of the scaled ball of radius ``extent``.
    """
    M = (state.darboux if dmap is None else dmap).M
    Minv = np.linalg.inv(M)
    half = np.linalg.norm(M * state.scales, axis=1)
    x, w = np.polynomial.legendre.leggauss(rule.nodes)
    nodes = [rule.extent * h * x for h in half]
    weights = [rule.extent * h * w for h in half]
    grid_rest = np.stack(np.meshgrid(*nodes[1:], indexing="ij"), axis=-1).reshape(-1, 3)
    w_rest = np.einsum("i,j,k->ijk", *weights[1:]).reshape(-1)

    norm = 0.0
    first = np.zeros(4)
    second = np.zeros((4, 4))
    z = np.empty((grid_rest.shape[0], 4))
    z[:, 1:] = grid_rest
    for z0, w0 in zip(nodes[0], weights[0]):
        z[:, 0] = z0
        fw = wigner_z(state, z @ Minv.T) * (w0 * w_rest)
        norm += fw.sum()
        first += fw @ z
        second += (z * fw[:, None]).T @ z
    _check_norm(norm)
    return _central(norm, first, second)


@dataclass(frozen=True)
class WignerSample:
    Q: np.ndarray
    P: np.ndarray
    value: float


def sample_wigner(state: FockState, points: Iterable[Sequence[float]]) -> list:
    """Evaluate at ``(q1, q2, p1, p2)`` points and wrap as samples."""
    out = []
    for z in points:
        z = np.asarray(z, dtype=float)
        out.append(WignerSample(z[:2], z[2:], wigner_z(state, z)))
    return out


def wigner_bound(state: FockState) -> float:
    """Cauchy-Schwarz bound ``(2 / (pi c))^2`` on ``|W|``."""
    return (2.0 / (math.pi * state.c)) ** 2


def wigner_extreme(state: FockState) -> float:
    """Value ``1 / (pi c)^2`` of ``|W|`` at the origin, the largest it gets."""
    return 1.0 / (math.pi * state.c) ** 2


def wigner_bound_check(state: FockState, samples: Iterable[WignerSample], tol: float = 1e-12) -> bool:
    """Assert ``|W| <= (2/(pi c))^2`` on the samples and parity-signed extremum at the origin.

    Raises:
        BoundViolated: on any violation (indicates a bug, not bad input).
    """
    bound = wigner_bound(state)
    for s in samples:
        if abs(s.value) > bound + tol:
            raise BoundViolated(f"|W| = {abs(s.value):.6g} exceeds {bound:.6g} at Q={s.Q}, P={s.P}")
    origin = wigner_fock(state, np.zeros(2), np.zeros(2))
    expected = state.parity * wigner_extreme(state)
    if abs(origin - expected) > tol * max(1.0, abs(expected)):
        raise BoundViolated(f"W(0) = {origin:.6g}, expected {expected:.6g}")
    return True


def wigner_grid(
    state: FockState,
    nodes: int = 64,
    extent: float = 6.0,
    plane: Optional[str] = "q1p1",
    base: Optional[Sequence[float]] = None,
):
    """Uniform grid of Wigner values for CSV export.

    Args:
        plane: one of ``q1p1, q2p2, q1q2, p1p2`` for a 2D slice through
            ``base``; ``None`` for the full 4D grid.
        extent: half-width in oscillator lengths.

    Returns:
        tuple: ``(header, rows)`` with rows in row-major grid order.
    """
    base = np.zeros(4) if base is None else np.asarray(base, dtype=float)
    if base.shape != (4,):
        raise ValueError("base point needs four coordinates")
    if plane is None:
        free = [0, 1, 2, 3]
    elif plane in PLANES:
        free = [AXES.index(plane[:2]), AXES.index(plane[2:])]
    else:
        raise ValueError(f"unknown plane {plane!r}; choose from {', '.join(PLANES)}")
    t = np.linspace(-extent, extent, nodes)
    mesh = np.meshgrid(*[t * state.scales[i] for i in free], indexing="ij")
    z = np.broadcast_to(base, mesh[0].shape + (4,)).copy()
    for i, m in zip(free, mesh):
        z[..., i] = m
    w = wigner_z(state, z)
    header = [AXES[i] for i in free] + ["w"]
    rows = np.column_stack([z[..., i].reshape(-1) for i in free] + [np.reshape(w, -1)])
    return header, rows


def write_grid_csv(fh, header, rows):
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(float(v)) for v in row])
