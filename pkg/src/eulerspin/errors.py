"""Exception types shared across the package."""


class EulerSpinError(Exception):
    """Base class for all library errors."""


class GibbsSingularityError(EulerSpinError):
    """Conversion to the Gibbs vector at an angle where tan(theta/2) has a pole."""


class AxisUndefinedError(EulerSpinError):
    """Axis extraction attempted where sin(theta/2) = 0 with no continuity context."""


class BoundarySingularityError(EulerSpinError):
    """Right-hand side evaluated inside the guard band around an angle boundary.

    Raised by the Euler-vector form near |E| = 2*pi*k (k >= 1) and by the
    axis/angle form near sin(theta/2) = 0.  When raised from an integration
    run, the partial trajectory is attached as ``trajectory``.
    """

    def __init__(self, message, trajectory=None, abort_time=None):
        super().__init__(message)
        self.trajectory = trajectory
        self.abort_time = abort_time


class GibbsOverflowError(EulerSpinError):
    """|G| exceeded the overflow guard during Gibbs-vector integration."""

    def __init__(self, message, trajectory=None, abort_time=None):
        super().__init__(message)
        self.trajectory = trajectory
        self.abort_time = abort_time


class ParityUndeterminedError(EulerSpinError):
    """All angular-velocity derivatives through order 4 vanish at an angle boundary."""


class OmegaRangeError(EulerSpinError):
    """Tabulated angular-velocity model queried outside its sample range."""


class NotDifferentiableError(EulerSpinError):
    """Derivative requested where the angular-velocity model is not differentiable."""


class ParallelAxisError(EulerSpinError):
    """Closed-form solution requested with the initial axis parallel to omega."""


class ThetaRangeError(EulerSpinError):
    """Initial angle outside the open interval (0, 2*pi)."""


class PeriodTooSmallError(EulerSpinError):
    """Strobe period smaller than twice the trajectory step."""


class SeriesTooShortError(EulerSpinError):
    """Spectral analysis requested on a series with fewer than 64 samples."""


class TooManySamplesError(EulerSpinError):
    """Recurrence matrix requested for more strided samples than the memory guard allows."""


class SchemaError(EulerSpinError):
    """CSV input does not match any known trajectory or analysis schema."""
