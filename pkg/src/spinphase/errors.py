"""Exception types shared across the simulation modules."""


class SpinPhaseError(Exception):
    """Base class for all errors raised by this package."""


class SingularPoint(SpinPhaseError):
    """A field was evaluated too close to a line-charge position."""

    def __init__(self, point, segment=None):
        self.point = tuple(float(c) for c in point)
        self.segment = segment
        where = f" (path segment {segment})" if segment is not None else ""
        super().__init__(f"field evaluated at singular point {self.point}{where}")


class StepTooLarge(SpinPhaseError):
    """An integrator step changed the moment norm beyond the allowed drift."""


class NotNormalized(SpinPhaseError):
    """A spinor norm deviates from 1 beyond tolerance."""


class UndefinedPhase(SpinPhaseError):
    """The interference visibility vanishes, so the phase is undefined."""


class SingularInversion(SpinPhaseError):
    """nu * |cos(phi)| is too small to invert the fringe observables."""


class GeodesicAmbiguous(SpinPhaseError):
    """Arc endpoints are antipodal; the shortest geodesic is not unique."""


class InsufficientSamples(SpinPhaseError):
    """Too few distinct samples to fit the fringe model."""


class ConfigError(SpinPhaseError):
    """A scenario configuration is missing or malformed."""
