"""Exception types raised across the simulator."""


class QDRAMError(Exception):
    """Base class for all simulator errors."""


class ZeroVector(QDRAMError, ValueError):
    pass


class NonFinite(QDRAMError, ValueError):
    pass


class InvalidState(QDRAMError, ValueError):
    """A value violates a state invariant (norm, trace, hermiticity, positivity)."""


class OutOfRange(QDRAMError, ValueError):
    pass


class NegativeTime(QDRAMError, ValueError):
    pass


class InvalidNoiseModel(QDRAMError, ValueError):
    pass


class EmptySample(QDRAMError, ValueError):
    pass


class ZeroProbabilityBranch(QDRAMError, ValueError):
    pass


class NonPositiveInput(QDRAMError, ValueError):
    pass


class GeometryViolation(QDRAMError, ValueError):
    pass


class PreconditionError(QDRAMError):
    """A protocol's physical premise does not hold for the current memory state.

    ``cycle`` is filled in by the experiment runner when the failure happens
    inside a refresh loop.
    """

    cycle: int | None = None


class MixedStateCell(PreconditionError):
    def __init__(self, cell: int, purity: float):
        super().__init__(
            f"cell {cell} is in a mixed state (purity {purity:.12g}); "
            "quantum erasure requires a pure quanton-detector state"
        )
        self.cell = cell
        self.purity = purity


class ParseError(QDRAMError, ValueError):
    pass


class ValidationError(QDRAMError, ValueError):
    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key
