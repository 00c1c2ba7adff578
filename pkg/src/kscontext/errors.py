"""Exception types shared by all modules."""


class KSError(Exception):
    """Base class for every error raised by the package."""


class MalformedScenario(KSError, ValueError):
    pass


class CliqueSizeMismatch(KSError, ValueError):
    pass


class CapExceeded(KSError):
    def __init__(self, cap, message=None):
        super().__init__(message or f"enumeration exceeded cap={cap}")
        self.cap = cap


class DuplicateRay(KSError, ValueError):
    pass


class DimensionMismatch(KSError, ValueError):
    pass


class NonClosing(KSError):
    pass


class NoDimensionFunction(KSError):
    pass


class NoSolutionUpTo(KSError):
    def __init__(self, d_max, reason=""):
        msg = f"no dimension function with d <= {d_max}"
        if reason:
            msg += f" ({reason})"
        super().__init__(msg)
        self.d_max = d_max
        self.reason = reason


class NoSolution(NoSolutionUpTo):
    """No dimension function exists for any d."""

    def __init__(self, reason):
        KSError.__init__(self, f"no dimension function for any d ({reason})")
        self.d_max = None
        self.reason = reason


class TooLarge(KSError):
    pass


class InvalidColouring(KSError, ValueError):
    pass


class InvalidOverlap(KSError, ValueError):
    pass
