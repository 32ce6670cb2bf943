"""Exception hierarchy.

Everything the library raises on purpose derives from :class:`PTError`. The CLI
maps :class:`InputError` subclasses to exit code 2 and :class:`NumericalError`
subclasses to exit code 3.
"""


class PTError(Exception):
    """Base class for library errors."""


class InputError(PTError, ValueError):
    """Malformed or out-of-domain input."""


class NumericalError(PTError, ArithmeticError):
    """A numerical method broke down or failed to converge."""


# potential algebra
class PoleProximity(InputError):
    pass


class NonFinite(NumericalError):
    pass


class BranchAmbiguity(InputError):
    """A rotation would have to pick a branch of a non-integer power."""

    def __init__(self, message, phase=None):
        super().__init__(message)
        self.phase = phase


class NotClosedUnderTransform(InputError):
    pass


class NotPTSymmetric(InputError):
    pass


class RotatedNotReal(NumericalError):
    pass


class IndexOutOfRange(InputError, IndexError):
    pass


class SchemaError(InputError):
    pass


# solvers
class PoleOnContour(InputError):
    pass


class ContourTooCoarse(InputError):
    pass


class QRNoConvergence(NumericalError):
    def __init__(self, message, partial=None, stuck_index=None):
        super().__init__(message)
        self.partial = partial
        self.stuck_index = stuck_index


class ShootingOverflow(NumericalError):
    pass


class NoRootFromSeed(NumericalError):
    def __init__(self, message, seed=None):
        super().__init__(message)
        self.seed = seed


class SpectrumIncomplete(NumericalError):
    def __init__(self, message, spectrum=None):
        super().__init__(message)
        self.spectrum = spectrum


class InverseIterationStall(NumericalError):
    pass


# reports
class GridMismatch(InputError):
    pass


class TooFewPoints(InputError):
    pass
