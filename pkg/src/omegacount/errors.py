"""Shared exception types."""


class MachineError(ValueError):
    """A machine definition breaks a structural invariant."""


class ArityError(MachineError):
    """A counter vector has the wrong length for the machine."""


class FreshLetterError(ValueError):
    """A marker or pad letter collides with the base alphabet."""


class UnderflowError(ValueError):
    """A stack or queue operation was applied to an empty container."""


class BuildScaleError(ValueError):
    """A requested construction would need more control states than the cap.

    Raised instead of attempting a build whose finite control is far beyond
    what an explicit transition table can hold (the residue trackers and
    block counters grow linearly with the product of the primes).
    """

    def __init__(self, message: str, estimated_states: int, cap: int):
        super().__init__(message)
        self.estimated_states = estimated_states
        self.cap = cap


class FormatError(ValueError):
    """A text file does not parse under the expected format."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
