"""Exception hierarchy shared across the package."""


class InertialFBError(Exception):
    """Base class for all package-specific errors."""


class ParamViolation(InertialFBError):
    """A solver parameter set fails one of the admissibility inequalities."""


class DimensionMismatch(InertialFBError):
    """Operands have incompatible shapes."""


class NonFiniteIterate(InertialFBError):
    """An iterate picked up a NaN or infinite coordinate."""

    def __init__(self, message, iteration=None):
        super().__init__(message)
        self.iteration = iteration


class NotOrthogonal(InertialFBError):
    """A transform claimed to be orthogonal fails the round-trip check."""


class InvalidKernel(InertialFBError):
    """Blur kernel parameters are not admissible."""


class BadDimensions(InertialFBError):
    """Image dimensions are incompatible with the requested transform."""


class ZeroVector(InertialFBError):
    """Power iteration collapsed to the zero vector."""


class EmptyGrid(InertialFBError):
    """A search grid contains no points."""


class MalformedPGM(InertialFBError):
    """A PGM file could not be parsed; carries the offending byte offset."""

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (byte offset {offset})"
        super().__init__(message)
        self.offset = offset


class ImageLoadError(InertialFBError):
    """An input image could not be loaded."""
