"""Exception hierarchy. Every numerical failure is a named subclass of DgVarError."""


class DgVarError(Exception):
    """Base class for all library errors."""


class NotPositiveDefinite(DgVarError, ValueError):
    pass


class EigenNoConvergence(DgVarError, ArithmeticError):
    pass


class InvalidModel(DgVarError, ValueError):
    pass


class DegenerateModel(DgVarError, ValueError):
    pass


class EmptyDomain(DgVarError, ArithmeticError):
    pass


class AllEigenvaluesZero(DgVarError, ValueError):
    pass


class InvalidExponent(DgVarError, ValueError):
    pass


class SchemeTooLarge(DgVarError, ArithmeticError):
    def __init__(self, n_required, cap):
        self.n_required = n_required
        self.cap = cap
        super().__init__(f"scheme needs N={n_required:.4g} terms, cap is {cap}")


class OutOfRange(DgVarError, ValueError):
    pass


class ToleranceTooLoose(DgVarError, ValueError):
    pass


class SampleTooSmall(DgVarError, ValueError):
    pass


class TooFewRepetitions(DgVarError, ValueError):
    pass


class ModelFileError(DgVarError, ValueError):
    """Model file could not be parsed; ``path`` names the offending field."""

    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}")
