"""Exception hierarchy.

Input problems derive from ``InputError`` (CLI exit code 2); numerical
breakdowns derive from ``NumericError`` (CLI exit code 3).
"""


class CuspidalError(Exception):
    pass


class InputError(CuspidalError, ValueError):
    pass


class NumericError(CuspidalError, ArithmeticError):
    pass


class ParseError(InputError):
    def __init__(self, message, offset, expected=()):
        self.offset = offset
        self.expected = tuple(sorted(set(expected)))
        detail = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{message} at offset {offset}{detail}")


class NotARoot(InputError):
    pass


class EqualModuli(InputError):
    pass


class MultiplicityTooSmall(InputError):
    pass


class ModulusTooSmall(NumericError):
    """A contour sample came too close to a zero of the polynomial."""

    def __init__(self, message, point=None):
        self.point = point
        super().__init__(message)


class NonConvergent(NumericError):
    pass


class BoundaryZero(NumericError):
    pass


class Diverged(NumericError):
    pass


class IndeterminateCluster(NumericError):
    pass
