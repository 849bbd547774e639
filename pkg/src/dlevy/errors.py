"""Exception hierarchy shared by all modules."""


class DLevyError(Exception):
    """Base class for every error raised by this package."""


class InvalidParams(DLevyError, ValueError):
    pass


class AlphaOne(InvalidParams):
    """Raised whenever a construction is requested with alpha == 1."""

    def __init__(self, what="this construction"):
        super().__init__(f"alpha = 1 is not supported for {what}; "
                         "the stable index must satisfy alpha != 1")


class AlphaBelowOne(InvalidParams):
    pass


class ZeroPath(DLevyError, ValueError):
    """The zero path has no polar decomposition."""


class InsufficientData(DLevyError, ValueError):
    pass


class OutOfWindow(DLevyError, ValueError):
    pass


class DegenerateTails(InvalidParams):
    pass


class EmptySample(DLevyError, ValueError):
    pass


class MismatchedTargets(DLevyError, ValueError):
    pass


class SchemaError(DLevyError, ValueError):
    """Malformed input file; the message names the offending row or column."""


class DataError(DLevyError, ValueError):
    pass
