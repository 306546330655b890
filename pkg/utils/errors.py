"""
Error hierarchy for the FlexNet solver suite
Every solver failure carries the object that explains it (a cut, a pair, a bound)
"""
from typing import Any, FrozenSet, Optional, Tuple


class FlexNetError(Exception):
    """Base class for all solver suite errors"""


class StructuralError(FlexNetError, ValueError):
    """Malformed graph data: bad vertex ids, self-loops, negative costs, broken flow conservation"""


class CapacityError(FlexNetError):
    """A configured desk-scale bound was exceeded"""

    def __init__(self, what: str, value: int, bound: int):
        self.what = what
        self.value = value
        self.bound = bound
        super().__init__(f"{what} = {value} exceeds the configured bound {bound}")


class PreconditionError(FlexNetError):
    """An operation was called on input violating its precondition"""

    def __init__(self, message: str, witness: Any = None):
        self.witness = witness
        super().__init__(message)


class InfeasibleInstanceError(FlexNetError):
    """The instance admits no feasible solution; `cut` is a deficient cut when known"""

    def __init__(self, message: str, cut: Any = None):
        self.cut = cut
        super().__init__(message)


class UncoverableCutError(InfeasibleInstanceError):
    """A family cut is crossed by no candidate edge"""


class UncrossableFamilyError(PreconditionError):
    """A family expected to be uncrossable has a crossing pair"""

    def __init__(
        self,
        message: str,
        pair: Tuple[FrozenSet[int], FrozenSet[int]],
        stage: Optional[int] = None
    ):
        self.pair = pair
        self.stage = stage
        super().__init__(message, witness=pair)


class NotRingFamilyError(PreconditionError):
    """A family expected to be a ring family is not one"""


class UnsupportedRegimeError(FlexNetError):
    """No algorithm with a proven guarantee exists for the requested (p, q)"""


class NonConvergenceError(FlexNetError):
    """Iterative method hit its iteration cap or stalled"""


class InstanceParseError(FlexNetError, ValueError):
    """Instance or solution file could not be parsed"""

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        prefix = f"line {line_number}: " if line_number is not None else ""
        super().__init__(prefix + message)


class GenerationError(FlexNetError):
    """Instance generation failed (attempt cap, or a figure checklist did not hold)"""


class InvariantViolation(FlexNetError, AssertionError):
    """Internal invariant broken; indicates a bug, not bad input"""
