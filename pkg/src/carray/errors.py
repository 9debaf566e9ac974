"""Exception hierarchy.

Validation problems derive from :class:`InvalidArgumentError` (also a
``ValueError``); numerical breakdowns derive from :class:`NumericalError`.
The CLI maps the first family to exit code 2 and the second to exit code 3.
"""


class CArrayError(Exception):
    """Base class for all package errors."""


class InvalidArgumentError(CArrayError, ValueError):
    pass


class ModeOutOfRangeError(InvalidArgumentError):
    def __init__(self, index, n_elements):
        self.index = index
        self.n_elements = n_elements
        half = n_elements / 2
        lo = f"{-half:g}"
        hi = f"{half:g}"
        super().__init__(f"mode {index} out of range: mode must lie in ({lo}, {hi}]")


class UnknownPresetError(InvalidArgumentError):
    pass


class PreconditionError(InvalidArgumentError):
    pass


class RangeError(InvalidArgumentError):
    pass


class NumericalError(CArrayError, ArithmeticError):
    """Base class for numerically degenerate situations."""


class DegeneratePatternError(NumericalError):
    pass


class SingularityError(NumericalError):
    pass


class LowMagnitudeError(NumericalError):
    pass


class SingularSystemError(NumericalError):
    pass
