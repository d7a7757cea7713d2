"""Exception hierarchy shared by every module of the package."""


class GeometryError(ValueError):
    """Base class for domain errors raised by the geometry routines."""


class ZeroSection(GeometryError):
    """The covector vanishes, so the point is not in the punctured bundle."""


class Inadmissible(GeometryError):
    """The lambda family leaves its validity region at the requested t."""

    def __init__(self, t, reason):
        self.t = t
        self.reason = reason
        super().__init__(f"inadmissible at t={t!r}: {reason}")


class NotPositiveDefinite(GeometryError):
    pass


class ZeroVector(GeometryError):
    pass


class EvaluationFailed(GeometryError):
    """A finite-difference probe landed outside the admissible region."""


class ConfigError(ValueError):
    pass


class NoAdmissiblePoints(RuntimeError):
    pass
