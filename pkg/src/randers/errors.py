"""Exception hierarchy for the engine.

Every error raised on purpose by this package derives from GeometryError so
callers can catch engine failures without swallowing programming errors.
"""


class GeometryError(Exception):
    """Base class for all engine errors."""


class InvalidParameterError(GeometryError, ValueError):
    """An argument violates a documented precondition."""


class MetricDegenerateError(GeometryError):
    """The wind is not a mild breeze: mu * m(r) >= 1 at the queried point."""


class VertexSingularError(GeometryError):
    """Operation requested at r = 0 where the polar chart degenerates."""


class NotEmbeddableError(GeometryError):
    """|m'| exceeds 1 somewhere, so the surface has no isometric embedding
    into Euclidean 3-space over the requested radial range."""


class InvalidBracketError(GeometryError):
    """Quadrature bracket contains a point with m(r) <= |nu| in its interior."""


class SearchHorizonError(GeometryError):
    """A root/zero search exhausted its horizon without bracketing."""

    def __init__(self, message, lower_bound=None):
        super().__init__(message)
        self.lower_bound = lower_bound


class InconsistentInputError(GeometryError):
    """Input data fails a consistency cross-check (e.g. wind subtraction of a
    claimed unit vector does not give a unit vector)."""


class NumericalBlowupError(GeometryError):
    """Integration ran into the vertex with nonzero angular speed, which no
    true geodesic can do; the trajectory data is numerically unusable."""


class InternalConsistencyError(GeometryError):
    """Two independent evaluation routes inside the engine disagree beyond
    round-off; indicates an engine bug, not bad user input."""
