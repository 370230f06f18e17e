"""Exception hierarchy shared by all modules."""


class GeometryError(ValueError):
    """Base class for every error raised by this package."""


class InvalidDimensionError(GeometryError):
    pass


class NoRealStructureError(GeometryError):
    pass


class DegenerateInputError(GeometryError):
    pass


class NormalizationError(GeometryError):
    pass


class WrongAmbientError(GeometryError):
    pass


class PreconditionError(GeometryError):
    pass


class ParameterError(GeometryError):
    pass


class FocalRangeError(ParameterError):
    """Tube radius reaches (or comes too close to) a focal point."""


class ChartSingularityError(GeometryError):
    """Finite-difference tangent frame is (numerically) rank deficient."""


class BoundaryError(GeometryError):
    """A difference stencil leaves the chart domain."""
