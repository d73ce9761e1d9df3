"""Structure matrices of the extended Heisenberg-Weyl algebra.

Phase-space vectors are ordered ``(q_1, ..., q_n, p_1, ..., p_n)`` throughout.
The deformed commutator form is ``Omega = f J + S`` with
``S = diag(theta E, eta E')`` built from two skew patterns ``E, E'``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple, Optional

import numpy as np
from scipy.linalg import expm, schur

from .errors import NonInvertibleForm, NotAntiSymplectic, NotSkew, ParameterError, ShapeMismatch

DEFAULT_TOL = 1e-10


def scaled_tol(tol: float, *arrays) -> float:
    """Absolute tolerance ``tol * max(1, ||A||_2, ...)``."""
    scale = 1.0
    for a in arrays:
        a = np.asarray(a)
        if a.size:
            scale = max(scale, float(np.linalg.norm(a, 2)) if a.ndim == 2 else float(np.max(np.abs(a))))
    return tol * scale


def _square(A, name="matrix") -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ShapeMismatch(f"{name} must be square, got shape {A.shape}")
    return A


def _check_skew(A: np.ndarray, tol: float) -> None:
    if np.linalg.norm(A + A.T) > scaled_tol(tol, A):
        raise NotSkew("matrix is not skew-symmetric within tolerance")


@dataclass(frozen=True)
class DeformationParams:
    """Scalar data of the deformed algebra.

    ``g`` is the commutator scale of the reference algebra and defaults to
    ``hbar``. ``f`` overrides the commutator scale of the deformed algebra;
    leave it ``None`` to derive it from the Darboux system (see
    :func:`commutator_scale`).
    """

    hbar: float
    theta: float = 0.0
    eta: float = 0.0
    g: Optional[float] = None
    epsilon_max: Optional[float] = None
    f: Optional[float] = None

    def __post_init__(self):
        if self.g is None:
            object.__setattr__(self, "g", float(self.hbar))
        if not self.hbar > 0:
            raise ParameterError(f"hbar must be positive, got {self.hbar}")
        if not self.g > 0:
            raise ParameterError(f"g must be positive, got {self.g}")
        if self.epsilon_max is not None:
            if not 0 <= self.epsilon_max < 1:
                raise ParameterError("epsilon_max must lie in [0, 1)")
            if abs(self.theta * self.eta) > (self.epsilon_max * self.g) ** 2:
                raise ParameterError(
                    f"|theta*eta| = {abs(self.theta * self.eta):.6g} exceeds "
                    f"(epsilon_max*g)^2 = {(self.epsilon_max * self.g) ** 2:.6g}"
                )

    @classmethod
    def toy(cls, hbar: float = 1.0, theta: float = 0.0) -> "DeformationParams":
        """Isotropic oscillator algebra: eta = -theta, f = hbar, g = sqrt(hbar^2 + theta^2)."""
        return cls(hbar=hbar, theta=theta, eta=-theta, g=float(np.hypot(hbar, theta)), f=hbar)

    @property
    def f_nominal(self) -> float:
        """``g (1 - theta eta / 4 g^2)``, the scale obtained when ``E' E = I``."""
        if self.f is not None:
            return float(self.f)
        return self.g * (1.0 - self.theta * self.eta / (4.0 * self.g**2))


@dataclass(frozen=True, eq=False)
class SkewPattern:
    """An ``n x n`` skew sign pattern (entries in {-1, 0, 1}, n even)."""

    entries: np.ndarray

    def __post_init__(self):
        E = _square(self.entries, "skew pattern")
        n = E.shape[0]
        if n == 0 or n % 2:
            raise ShapeMismatch(f"skew patterns need even positive dimension, got {n}")
        if not np.all(np.isin(E, (-1.0, 0.0, 1.0))):
            raise ValueError("skew pattern entries must be -1, 0 or +1")
        if np.any(np.diag(E) != 0) or np.any(E != -E.T):
            raise NotSkew("skew pattern must be antisymmetric with zero diagonal")
        E = E.copy()
        E.setflags(write=False)
        object.__setattr__(self, "entries", E)

    @classmethod
    def canonical(cls, n: int, signs=None) -> "SkewPattern":
        """Block form ``(+) s_j [[0, 1], [-1, 0]]`` of dimension ``n``."""
        if n <= 0 or n % 2:
            raise ShapeMismatch(f"skew patterns need even positive dimension, got {n}")
        k = n // 2
        signs = np.ones(k) if signs is None else np.asarray(signs, dtype=float)
        if signs.shape != (k,):
            raise ShapeMismatch(f"need {k} block signs")
        return cls(block_skew(signs))

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def orthogonal(self) -> bool:
        E = self.entries
        return bool(np.array_equal(E.T @ E, np.eye(self.n)))

    @property
    def T(self) -> np.ndarray:
        return self.entries.T


def block_skew(values) -> np.ndarray:
    """Direct sum of ``[[0, v], [-v, 0]]`` blocks."""
    values = np.asarray(values, dtype=float)
    k = values.size
    A = np.zeros((2 * k, 2 * k))
    idx = np.arange(k)
    A[2 * idx, 2 * idx + 1] = values
    A[2 * idx + 1, 2 * idx] = -values
    return A


@dataclass(frozen=True, eq=False)
class PhaseSpaceForm:
    """The skew form ``Omega = f J + S`` on a ``2n``-dimensional phase space."""

    J: np.ndarray
    S: np.ndarray
    Omega: np.ndarray
    f: float
    conformal_scale: Optional[float] = None
    params: Optional[DeformationParams] = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return self.Omega.shape[0] // 2

    @property
    def dim(self) -> int:
        return self.Omega.shape[0]

    @property
    def is_standard(self) -> bool:
        """True when ``Omega`` is a positive multiple of ``J``."""
        return self.conformal_scale is not None and bool(
            np.linalg.norm(self.Omega - self.conformal_scale * self.J) <= DEFAULT_TOL * self.conformal_scale
        )

    @property
    def anticommuting(self) -> bool:
        """``{S, J} = 0``: the anti-symplectic deformation family (includes S = 0)."""
        return bool(np.linalg.norm(self.S @ self.J + self.J @ self.S) <= scaled_tol(DEFAULT_TOL, self.S))

    def scaled(self, s: float) -> "PhaseSpaceForm":
        """Form with every commutator scaled by ``s`` (homogeneous degree one)."""
        c = None if self.conformal_scale is None else abs(s) * self.conformal_scale
        return PhaseSpaceForm(self.J, s * self.S, s * self.Omega, s * self.f, c, None)


def standard_j(n: int) -> np.ndarray:
    """The standard symplectic matrix ``[[0, I], [-I, 0]]`` of size ``2n``."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    I = np.eye(n)
    Z = np.zeros((n, n))
    return np.block([[Z, I], [-I, Z]])


def conformal_scale(Omega, tol: float = DEFAULT_TOL) -> Optional[float]:
    """Return ``c > 0`` with ``Omega^T Omega = c^2 I`` if it exists, else None."""
    Omega = np.asarray(Omega, dtype=float)
    G = Omega.T @ Omega
    c2 = float(np.trace(G)) / G.shape[0]
    if c2 <= 0:
        return None
    if np.linalg.norm(G - c2 * np.eye(G.shape[0])) <= tol * c2:
        return float(np.sqrt(c2))
    return None


def commutator_scale(params: DeformationParams, E: SkewPattern, Eprime: SkewPattern) -> float:
    """Commutator scale ``f`` of the deformed algebra.

    Taken from the trace of ``g (A D^T - B C^T) = f I`` for the block family
    ``A = aI, B = b E^T, C = c E', D = I/a``, i.e.
    ``f = g (1 - theta eta tr(E' E) / (4 g^2 n))``. This equals
    ``g (1 - theta eta / 4g^2)`` when ``E' E = I`` and flips the sign of the
    correction when ``E' = E`` is orthogonal.
    """
    if params.f is not None:
        return float(params.f)
    n = E.n
    kappa = float(np.trace(Eprime.entries @ E.entries)) / n
    return params.g * (1.0 - kappa * params.theta * params.eta / (4.0 * params.g**2))


def build_form(
    params: DeformationParams,
    E: Optional[SkewPattern] = None,
    Eprime: Optional[SkewPattern] = None,
    *,
    n: int = 2,
    tol: float = DEFAULT_TOL,
) -> PhaseSpaceForm:
    """Assemble ``Omega = f J + diag(theta E, eta E')``.

    Args:
        params: deformation parameters.
        E, Eprime: skew patterns for positions and momenta; default to the
            canonical block pattern of dimension ``n``.
        n: number of configuration dimensions when patterns are omitted.
        tol: relative tolerance for the conformal-scale and invertibility tests.

    Returns:
        PhaseSpaceForm: the assembled form, with ``conformal_scale`` set iff
        ``Omega^T Omega`` is scalar.

    Raises:
        NonInvertibleForm: if ``Omega`` is singular within tolerance.
    """
    if E is None:
        E = SkewPattern.canonical(n)
    if Eprime is None:
        Eprime = SkewPattern.canonical(E.n)
    if E.n != Eprime.n:
        raise ShapeMismatch(f"patterns differ in dimension: {E.n} vs {Eprime.n}")
    n = E.n
    f = commutator_scale(params, E, Eprime)
    J = standard_j(n)
    Z = np.zeros((n, n))
    S = np.block([[params.theta * E.entries, Z], [Z, params.eta * Eprime.entries]])
    Omega = f * J + S
    sv = np.linalg.svd(Omega, compute_uv=False)
    if sv[-1] <= tol * max(sv[0], 1.0):
        raise NonInvertibleForm(
            f"Omega is singular (smallest singular value {sv[-1]:.3g}); f = {f:.6g}"
        )
    return PhaseSpaceForm(J, S, Omega, f, conformal_scale(Omega, tol), params)


def standard_form(n: int, g: float = 1.0) -> PhaseSpaceForm:
    """The undeformed form ``g J``."""
    J = standard_j(n)
    return PhaseSpaceForm(J, np.zeros_like(J), g * J, float(g), float(g), None)


def pfaffian(A, tol: float = DEFAULT_TOL) -> float:
    """Pfaffian by recursive expansion along the first row.

    Exact in exact arithmetic; cost is ``(2k-1)!!`` terms, fine for ``2k <= 16``.
    """
    A = _square(A)
    _check_skew(A, tol)
    m = A.shape[0]
    if m % 2:
        raise ShapeMismatch(f"Pfaffian needs even dimension, got {m}")
    data = A.tolist()

    @lru_cache(maxsize=None)
    def pf(idx: tuple) -> float:
        if not idx:
            return 1.0
        i, rest = idx[0], idx[1:]
        total = 0.0
        for k, j in enumerate(rest):
            a = data[i][j]
            if a == 0.0:
                continue
            sign = 1.0 if k % 2 == 0 else -1.0
            total += sign * a * pf(rest[:k] + rest[k + 1 :])
        return total

    return pf(tuple(range(m)))


class SkewCanonical(NamedTuple):
    O: np.ndarray
    lambdas: np.ndarray
    signs: np.ndarray


def skew_canonical(A, tol: float = DEFAULT_TOL, *, proper: bool = False) -> SkewCanonical:
    """Orthogonal reduction of a skew matrix to ``(+) [[0, s_j l_j], [-s_j l_j, 0]]``.

    Blocks are ordered by descending ``l_j`` and normalised to ``s_j = +1``.
    A single orthogonal ``O`` cannot always do both and have ``det O = +1``
    (e.g. ``A = -J`` in 2D), so with ``proper=True`` the orientation is fixed
    to ``det O = +1`` by letting the last block carry ``s_k = -1`` if needed.

    Returns:
        SkewCanonical: ``(O, lambdas, signs)`` with ``O.T @ A @ O`` block diagonal.
    """
    A = _square(A)
    _check_skew(A, tol)
    m = A.shape[0]
    if m % 2:
        raise ShapeMismatch(f"skew canonical form needs even dimension, got {m}")
    if m == 0:
        return SkewCanonical(np.eye(0), np.zeros(0), np.zeros(0))
    T, Q = schur(0.5 * (A - A.T), output="real")
    zero_tol = scaled_tol(tol, A)

    pairs = []  # (lambda, col_a, col_b)
    null_cols = []
    i = 0
    while i < m:
        if i + 1 < m and abs(T[i + 1, i]) > zero_tol:
            lam = 0.5 * (T[i, i + 1] - T[i + 1, i])
            a, b = Q[:, i], Q[:, i + 1]
            if lam < 0:
                a, b, lam = b, a, -lam
            pairs.append((lam, a, b))
            i += 2
        else:
            null_cols.append(Q[:, i])
            i += 1
    for k in range(0, len(null_cols), 2):
        pairs.append((0.0, null_cols[k], null_cols[k + 1]))

    pairs.sort(key=lambda p: -p[0])
    O = np.column_stack([v for _, a, b in pairs for v in (a, b)])
    lambdas = np.array([p[0] for p in pairs])
    signs = np.ones(len(pairs))
    if proper and np.linalg.det(O) < 0:
        O[:, [-2, -1]] = O[:, [-1, -2]]
        signs[-1] = -1.0
    return SkewCanonical(O, lambdas, signs)


class SymplecticClass(enum.Enum):
    SYMPLECTIC = "Symplectic"
    ANTI_SYMPLECTIC = "AntiSymplectic"
    NEITHER = "Neither"


def classify_symplectic(M, tol: float = DEFAULT_TOL) -> SymplecticClass:
    """Classify ``M`` by ``M^T J M = +J``, ``-J`` or neither."""
    M = _square(M)
    if M.shape[0] % 2:
        raise ShapeMismatch("symplectic classification needs even dimension")
    J = standard_j(M.shape[0] // 2)
    G = M.T @ J @ M
    atol = scaled_tol(tol, M) * max(1.0, float(np.linalg.norm(M, 2)))
    if np.linalg.norm(G - J) <= atol:
        return SymplecticClass.SYMPLECTIC
    if np.linalg.norm(G + J) <= atol:
        return SymplecticClass.ANTI_SYMPLECTIC
    return SymplecticClass.NEITHER


def reflection_t(n: int) -> np.ndarray:
    """``T = diag(I_n, -I_n)``, the canonical anti-symplectic involution."""
    return np.diag(np.concatenate([np.ones(n), -np.ones(n)]))


def anti_symplectic_split(M, tol: float = DEFAULT_TOL):
    """Factor an anti-symplectic ``M`` as ``T @ S`` with ``S`` symplectic.

    Returns:
        tuple: ``(T, S)`` with ``T = diag(I, -I)``.
    """
    M = _square(M)
    if classify_symplectic(M, tol) is not SymplecticClass.ANTI_SYMPLECTIC:
        raise NotAntiSymplectic("matrix does not satisfy M^T J M = -J")
    T = reflection_t(M.shape[0] // 2)
    return T, T @ M  # T is its own inverse


def random_symplectic(n: int, rng: np.random.Generator, scale: float = 0.5) -> np.ndarray:
    """``expm(J H)`` for a random symmetric ``H``; an element of ``Sp(2n, R)``."""
    X = rng.normal(scale=scale, size=(2 * n, 2 * n))
    return expm(standard_j(n) @ (X + X.T) / 2)
