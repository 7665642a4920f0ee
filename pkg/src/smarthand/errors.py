"""Exception hierarchy shared by all smarthand subsystems.

Grouped so the CLI can map them onto stable exit codes: data/format
problems are distinct from model problems.
"""


class SmartHandError(Exception):
    """Base class for all errors raised by this package."""


# --- data / file format errors -------------------------------------------

class DataError(SmartHandError):
    """Bad input data or a malformed/corrupt file."""


class FileFormatError(DataError):
    """File does not conform to its declared binary or text format."""


class ChecksumMismatch(DataError):
    def __init__(self, expected: int, actual: int):
        super().__init__(f"CRC mismatch: expected {expected:#010x}, got {actual:#010x}")
        self.expected = expected
        self.actual = actual


class MaskCountMismatch(DataError):
    def __init__(self, actual: int, expected: int = 548):
        super().__init__(f"hand mask has {actual} active taxels, expected {expected}")
        self.actual = actual
        self.expected = expected


class EmptyInput(DataError):
    """An operation that needs at least one element got none."""


class NotEnoughValidFrames(DataError):
    def __init__(self, available: int, requested: int):
        super().__init__(f"recording has {available} valid frames, {requested} requested")
        self.available = available
        self.requested = requested


class NegativeForce(DataError):
    """Force values must be >= 0."""


class OutOfRange(DataError):
    """Coordinate or value outside its allowed range."""


class SingularNetwork(DataError):
    """Resistor network produced a singular nodal system."""


class CrcMismatch(DataError):
    """Wire packet failed its CRC-16 check."""


class Truncated(DataError):
    """Byte stream ends before a complete packet; feed more bytes."""


class FrameSourceExhausted(DataError):
    """A finite frame source (recording replay) ran out of frames."""


# --- model errors ----------------------------------------------------------

class ModelError(SmartHandError):
    """Inference graph / weight problems."""


class ShapeMismatch(ModelError):
    """Tensor shapes are inconsistent for the requested operation."""


class WeightMismatch(ModelError):
    """Weight store does not match the graph (missing/extra/mis-shaped)."""


class GraphError(ModelError):
    """Malformed graph definition."""


class NonPositiveVariance(ModelError):
    """Batch-norm running variance must be positive to fold."""


class ScaleOverflow(ModelError):
    """Value not representable in Q15 at the requested scale."""
