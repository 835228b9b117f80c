"""Exception hierarchy shared by all hocurve modules."""


class HocurveError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(HocurveError):
    pass


class NonUnitStep(HocurveError):
    pass


class RepeatedVertex(HocurveError):
    pass


class EmptyInput(HocurveError):
    pass


class IndexOutOfRange(HocurveError):
    pass


class ContinuityViolation(HocurveError):
    """An inflation plan breaks the curve-continuity conditions.

    Carries the 0-based edge slot and which condition failed.
    """

    def __init__(self, index: int, condition: str, detail: str = ""):
        self.index = index
        self.condition = condition
        msg = f"continuity violated at edge slot {index} ({condition})"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class ScheduleViolation(HocurveError):
    pass


class UnsupportedDimension(HocurveError):
    pass


class UnsupportedFamily(HocurveError):
    pass


class InternalContinuityFailure(HocurveError):
    pass


class NotSelfSimilar(HocurveError):
    def __init__(self, block: int, detail: str = ""):
        self.block = block
        msg = f"block {block} is not an isometric copy of the parent curve"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class NotAGrayImage(HocurveError):
    pass


class AxisAbsent(HocurveError):
    pass


class CoordinateOutOfRange(HocurveError):
    pass


class DimensionTooSmall(HocurveError):
    pass


class PrecisionMismatch(HocurveError):
    pass


class OutOfGrid(HocurveError):
    pass


class OutOfRange(HocurveError):
    pass


class ParseError(HocurveError):
    def __init__(self, message: str, line: int | None = None, offset: int | None = None):
        self.line = line
        self.offset = offset
        where = ""
        if line is not None:
            where = f" (line {line})"
        elif offset is not None:
            where = f" (offset {offset})"
        super().__init__(message + where)


class BudgetExceeded(HocurveError):
    pass


class SectionNotFound(HocurveError):
    pass


class InternalInvariantError(HocurveError):
    """The builder observed a state its own invariants rule out."""
