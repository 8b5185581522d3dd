"""Exception classes shared across the package."""


class ShellCodesError(Exception):
    """Base class for all package errors."""


class CapExceeded(ShellCodesError):
    """A configured size cap (shell size, vertex count, pair budget) was exceeded."""


class DimensionMismatch(ShellCodesError, ValueError):
    pass


class TooFewVectors(ShellCodesError, ValueError):
    pass


class BlockSystemViolation(ShellCodesError, ValueError):
    """A degree-2n permutation does not preserve the pairing {2i-1, 2i}."""


class UnsupportedFamily(ShellCodesError, ValueError):
    pass


class TooLarge(ShellCodesError, ValueError):
    pass


class VerificationFailed(ShellCodesError):
    pass


class NotOrthogonal(ShellCodesError, ValueError):
    pass


class UnequalRowNorms(ShellCodesError, ValueError):
    pass


class NoKnownConstruction(ShellCodesError, ValueError):
    pass


class IrrationalAngle(ShellCodesError, ValueError):
    pass


class DegenerateSpan(ShellCodesError, ValueError):
    pass


class CosineExceeded(ShellCodesError):
    """Raised by union_scaled; ``pair`` holds the offending (point, point) witness."""

    def __init__(self, message, pair=None, cosine=None):
        super().__init__(message)
        self.pair = pair
        self.cosine = cosine


class DuplicatePoint(ShellCodesError, ValueError):
    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class MalformedFile(ShellCodesError, ValueError):
    pass
