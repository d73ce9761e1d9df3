"""Exception types raised across the package."""


class NCPhaseError(Exception):
    """Base class for all ncphase errors."""


class ParameterError(NCPhaseError, ValueError):
    """Deformation parameters violate their invariants."""


class ShapeMismatch(NCPhaseError, ValueError):
    pass


class NotSkew(NCPhaseError, ValueError):
    pass


class NotSymmetric(NCPhaseError, ValueError):
    pass


class NonInvertibleForm(NCPhaseError, ValueError):
    pass


class NotAntiSymplectic(NCPhaseError, ValueError):
    pass


class NotSymplectic(NCPhaseError, ValueError):
    pass


class DegenerateDeformation(NCPhaseError, ValueError):
    """The commutator scale f vanishes, so the Darboux system has no solution."""


class NotOrthogonalDarboux(NCPhaseError, ValueError):
    pass


class FormMismatch(NCPhaseError, ValueError):
    pass


class NotOmegaSymplectic(NCPhaseError, ValueError):
    pass


class NotPositiveDefinite(NCPhaseError, ValueError):
    pass


class NoConformalScale(NCPhaseError, ValueError):
    """The form has no scalar c with Omega^T Omega = c^2 I."""


class NotGroundState(NCPhaseError, ValueError):
    pass


class QuadratureDiverged(NCPhaseError, RuntimeError):
    pass


class BoundViolated(NCPhaseError, AssertionError):
    """A Wigner value exceeded its analytic bound (indicates a bug)."""


class SpectrumPairingError(NCPhaseError, RuntimeError):
    """Eigenvalues of a skew matrix failed to pair as +/- i nu."""


class InputError(NCPhaseError, ValueError):
    """Malformed user input (state documents, CLI arguments)."""
