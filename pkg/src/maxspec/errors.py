"""Exception types shared across the toolkit."""


class MaxSpecError(Exception):
    """Base class for all toolkit errors."""


class DimensionMismatchError(MaxSpecError):
    """Operands have incompatible shapes."""


class ValidationError(MaxSpecError):
    """Input failed a precondition (negative entry, bad parameter, ...)."""


class OracleViolationError(MaxSpecError):
    """A lazy matrix probe returned a value outside [0, norm_bound]."""


class ResourceCapError(MaxSpecError):
    """A computation exceeded its configured resource cap."""


class MonotoneScheduleError(MaxSpecError):
    """A recorded lower-bound schedule decreased; indicates a bug."""
