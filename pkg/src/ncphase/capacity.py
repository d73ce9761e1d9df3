"""Linear symplectic capacities of Wigner ellipsoids ``{z : z^T Sigma^-1 z / 2 <= 1}`` and their duals."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .covariance import CovarianceState
from .errors import NoConformalScale, ShapeMismatch
from .phase_space_algebra import DEFAULT_TOL, scaled_tol
from .williamson import SymplecticSpectrum, omega_spectrum


@dataclass(frozen=True, eq=False)
class CapacityReport:
    """Capacities and, where the 4D anti-symplectic bounds apply, their verdicts.

    ``lower_ok``/``upper_ok`` are None when the bound hypotheses (n = 2,
    ``{S, J} = 0``) do not hold; the capacities are still reported.
    """

    c_lin: float
    c_lin_dual: float
    lower_bound: float
    upper_bound_dual: float
    lower_ok: Optional[bool]
    upper_ok: Optional[bool]
    conformal_scale: float
    spectrum: SymplecticSpectrum

    @property
    def bounds_checked(self) -> bool:
        return self.lower_ok is not None

    @property
    def bound_ok(self) -> Optional[bool]:
        if not self.bounds_checked:
            return None
        return bool(self.lower_ok and self.upper_ok)


def wigner_capacity(state: CovarianceState, tol: float = DEFAULT_TOL) -> CapacityReport:
    """Capacity ``2 pi nu_min / c`` of the Wigner ellipsoid and ``pi c / nu_max`` of its dual."""
    c = state.form.conformal_scale
    if c is None:
        raise NoConformalScale("capacities need a conformal form (Omega^T Omega = c^2 I)")
    spec = omega_spectrum(state, tol)
    c_lin = 2 * np.pi * spec.nu_min / c
    c_dual = np.pi * c / spec.nu_max
    lower = np.pi * c
    upper = 2 * np.pi / c
    lower_ok = upper_ok = None
    if state.n == 2 and state.form.anticommuting:
        lower_ok = bool(c_lin >= lower - tol * max(1.0, lower))
        upper_ok = bool(c_dual <= upper + tol * max(1.0, upper))
    return CapacityReport(c_lin, c_dual, lower, upper, lower_ok, upper_ok, c, spec)


def ellipsoid_contains(inner: CovarianceState, outer: CovarianceState, tol: float = DEFAULT_TOL) -> bool:
    """Inclusion of Wigner ellipsoids, i.e. ``Sigma_inner <= Sigma_outer`` in Loewner order."""
    if inner.sigma.shape != outer.sigma.shape:
        raise ShapeMismatch("ellipsoids live in different dimensions")
    diff = outer.sigma - inner.sigma
    return bool(np.linalg.eigvalsh(diff)[0] >= -scaled_tol(tol, inner.sigma, outer.sigma))


def monotonicity_check(inner: CovarianceState, outer: CovarianceState, tol: float = DEFAULT_TOL) -> bool:
    """Whether ``c_lin(inner) <= c_lin(outer)`` for nested ellipsoids sharing a form."""
    if not np.allclose(inner.form.Omega, outer.form.Omega, rtol=0, atol=scaled_tol(tol, inner.form.Omega)):
        raise ValueError("monotonicity is only defined for a shared form")
    if not ellipsoid_contains(inner, outer, tol):
        raise ValueError("inner ellipsoid is not contained in outer")
    a = wigner_capacity(inner, tol).c_lin
    b = wigner_capacity(outer, tol).c_lin
    return bool(a <= b + tol * max(1.0, b))


@dataclass(frozen=True, eq=False)
class CapacityComparison:
    first: CapacityReport
    second: CapacityReport
    relations: dict

    @property
    def equal(self) -> bool:
        return self.relations["c_lin_equal"] and self.relations["c_lin_dual_equal"]


def capacity_compare(first: CovarianceState, second: CovarianceState, tol: float = 1e-9) -> CapacityComparison:
    """Report which capacity orderings hold between two states (no universal order is assumed).

    ``relations`` holds ``c_lin(first) >= c_lin(second)`` and
    ``c_lin_dual(first) <= c_lin_dual(second)`` plus equality flags.
    """
    a = wigner_capacity(first)
    b = wigner_capacity(second)

    def close(x, y):
        return abs(x - y) <= tol * max(1.0, abs(x), abs(y))

    relations = {
        "c_lin_first_ge_second": bool(a.c_lin >= b.c_lin or close(a.c_lin, b.c_lin)),
        "c_lin_dual_first_le_second": bool(a.c_lin_dual <= b.c_lin_dual or close(a.c_lin_dual, b.c_lin_dual)),
        "c_lin_equal": close(a.c_lin, b.c_lin),
        "c_lin_dual_equal": close(a.c_lin_dual, b.c_lin_dual),
    }
    return CapacityComparison(a, b, relations)


def inclusion_chain(*states: CovarianceState, tol: float = DEFAULT_TOL) -> list:
    """``[E_0 in E_1, E_1 in E_2, ...]`` for consecutive Wigner ellipsoids."""
    return [ellipsoid_contains(a, b, tol) for a, b in zip(states, states[1:])]
