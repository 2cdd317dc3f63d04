"""Exception hierarchy shared by the whole package."""


class HyperpiError(Exception):
    """Base class for all package errors."""


class SeriesError(HyperpiError, ValueError):
    """A truncated-series operation was called outside its domain."""


class SeedError(HyperpiError, ValueError):
    """A seed segment is not a root of its curve to the stated order."""


class NumericalError(HyperpiError, ArithmeticError):
    """A ball computation could not be carried out rigorously."""


class DivergenceError(NumericalError):
    """The requested series does not converge at the given point."""


class SingularBranchError(NumericalError):
    """The derivative with respect to the branch variable vanishes."""


class BranchError(NumericalError):
    """Branch tracking failed, or the branch cannot be identified."""


class RecognitionError(HyperpiError):
    """A numeric value could not be matched to an exact form."""


class IncompatibleError(HyperpiError, ValueError):
    """Two catalog objects cannot be combined."""


class CatalogError(HyperpiError, ValueError):
    """Malformed catalog text. Carries a 1-based line and column."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
        self.message = message
