"""Exception types raised by orthobound."""


class OrthoboundError(Exception):
    """Base class for every error raised by the library."""


class ShapeError(OrthoboundError, ValueError):
    """Dimensions, lengths or family sizes do not agree."""


class ModeError(OrthoboundError, ValueError):
    """Real and complex data were mixed, or a real-only routine got complex data."""


class DomainError(OrthoboundError, ValueError):
    """A scalar parameter lies outside its admissible range."""


class FamilyError(OrthoboundError, ValueError):
    """A family of vectors fails the orthonormality check."""


class DependenceError(FamilyError):
    """Every input vector was linearly dependent on the earlier ones."""


class ResolutionError(OrthoboundError, ValueError):
    """A quadrature rule has too few nodes for the requested family."""


class UnsupportedTagError(OrthoboundError, KeyError):
    """Unknown theorem tag."""


class HypothesisError(OrthoboundError):
    """The hypothesis of an inequality does not hold for the given input.

    Attributes
    ----------
    reports : tuple
        The condition reports that were evaluated.
    failed : tuple of str
        Names of the inputs whose condition failed (e.g. ``("x",)``).
    excess : float
        Largest measured amount by which a condition was violated.
    """

    def __init__(self, message, reports=(), failed=(), excess=0.0):
        super().__init__(message)
        self.reports = tuple(reports)
        self.failed = tuple(failed)
        self.excess = float(excess)


class ProblemError(OrthoboundError, ValueError):
    """A problem document is malformed; `location` names the offending field."""

    def __init__(self, message, location=""):
        super().__init__(f"{location}: {message}" if location else message)
        self.location = location
