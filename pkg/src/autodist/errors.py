"""Exception hierarchy shared by all modules."""


class AutodistError(Exception):
    """Base class for every error raised by the package."""

    exit_code = 3


class ParseError(AutodistError):
    exit_code = 2


class InvariantError(AutodistError):
    """A series or parameter set violates one of its structural rules."""

    exit_code = 2

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class TruncationExceeded(AutodistError):
    def __init__(self, requested, available):
        self.requested = requested
        self.available = available
        super().__init__(
            f"requested N={requested} exceeds series truncation M={available}")


class PreconditionError(AutodistError):
    exit_code = 2


class ResolutionError(PreconditionError):
    """Sampling grid or quadrature too coarse for the requested frequency."""


class UnavailableTranslate(AutodistError):
    exit_code = 4


class QuadratureError(AutodistError):
    def __init__(self, message, achieved_bound):
        self.achieved_bound = achieved_bound
        super().__init__(f"{message} (achieved bound {achieved_bound:.3e})")


class PrecisionExhausted(AutodistError):
    def __init__(self, message, achieved=()):
        self.achieved = list(achieved)
        super().__init__(f"{message} (achieved depth {len(self.achieved)})")


class InadmissibleParameters(AutodistError):
    exit_code = 2


class MissingDataFile(AutodistError):
    exit_code = 4
