"""Uncertainty relations, symplectic spectra and capacities on non-commutative phase spaces."""

__version__ = "0.1.0"

from .capacity import CapacityReport, capacity_compare, ellipsoid_contains, monotonicity_check, wigner_capacity
from .covariance import (
    CertificationReport,
    CovarianceState,
    certify,
    conjugated_certify,
    invariance_check,
    rsup2_residual,
    rsup4_residual,
    scaling_psd,
    transform,
)
from .darboux import DarbouxMap, build_map, compose_pomega, toy_map, verify_map
from .oscillator import (
    FockState,
    QuadratureRule,
    energy,
    ground_sigma_standard,
    laguerre,
    moments_quadrature,
    pullback_moments,
    sigma_extended,
    wigner_bound_check,
    wigner_fock,
)
from .phase_space_algebra import (
    DEFAULT_TOL,
    DeformationParams,
    PhaseSpaceForm,
    SkewPattern,
    SymplecticClass,
    anti_symplectic_split,
    build_form,
    classify_symplectic,
    pfaffian,
    skew_canonical,
    standard_form,
    standard_j,
)
from .williamson import (
    FormKind,
    NormalForm,
    SymplecticSpectrum,
    hermitian_mu_roots,
    minor_chain,
    normal_form,
    omega_spectrum,
)
