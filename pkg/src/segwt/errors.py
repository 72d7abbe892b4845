"""Exception taxonomy shared by every module.

The CLI maps these onto exit codes, and the brute-force oracles raise the
same classes as the indexes so that error behaviour is differentially
testable alongside answers.
"""


class SegwtError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(SegwtError, ValueError):
    """Input data violates a structural precondition."""


class DuplicateCoordinateError(ValidationError):
    """Two endpoints share an x-coordinate, or two segments share a y."""

    def __init__(self, axis: str, value):
        self.axis = axis
        self.value = value
        super().__init__(f"duplicate {axis}-coordinate {value}")


class CoordinateRangeError(ValidationError):
    """A coordinate falls outside the rank-space grid."""

    def __init__(self, axis: str, value, lo: int, hi: int):
        self.axis = axis
        self.value = value
        super().__init__(f"{axis}-coordinate {value} outside [{lo}, {hi}]")


class DegenerateSegmentError(ValidationError):
    """A segment has x_left >= x_right."""

    def __init__(self, x_left, x_right):
        self.x_left = x_left
        self.x_right = x_right
        super().__init__(f"segment endpoints not ordered: x_left={x_left} >= x_right={x_right}")


class TieError(ValidationError):
    """Strict rank-space reduction hit equal raw coordinates."""

    def __init__(self, axis: str, value):
        self.axis = axis
        self.value = value
        super().__init__(f"tie in raw {axis}-coordinate at {value}")


class ParseError(SegwtError, ValueError):
    """A segment file line could not be parsed."""

    def __init__(self, line_no: int, text: str, reason: str):
        self.line_no = line_no
        self.text = text
        super().__init__(f"line {line_no}: {reason}: {text!r}")


class RangeError(SegwtError, IndexError):
    """A query position is outside its documented domain."""


class NotFoundError(SegwtError, LookupError):
    """A requested occurrence does not exist.

    ``available`` carries how many occurrences there are (e.g. the number
    of segments crossing the queried vertical line).
    """

    def __init__(self, message: str, available: int = 0):
        self.available = available
        super().__init__(message)


class EnumerationLimitError(SegwtError, ValueError):
    """Exhaustive instance enumeration was asked for an unreasonable n."""


class ContainerError(SegwtError, ValueError):
    """A serialized index container is malformed or corrupted."""
