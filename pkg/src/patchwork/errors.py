"""Exception types shared across the package."""


class PatchworkError(Exception):
    """Base class for all patchwork errors."""


class InvalidTileError(PatchworkError):
    """A polygon does not describe a valid tile (degenerate, self-crossing, ...)."""


class CoverageError(PatchworkError):
    """A patch or window fails to cover the required region."""


class AdmissibilityError(PatchworkError):
    """A group element is rejected by the action's admissibility predicate."""


class IndexMismatchError(PatchworkError):
    """Piecewise elements defined over incompatible index sets."""


class DomainError(PatchworkError):
    """Argument outside a function's domain (e.g. impact functions need s > sqrt(2))."""


class G6ViolationError(PatchworkError):
    """The enclosing-radius bound is infinite for the requested action/family."""


class InsufficientWindowError(PatchworkError):
    """The search window was exhausted before a witness could be found."""


class ParseError(PatchworkError):
    """Malformed input document.

    ``where`` names the offending field or JSON path.
    """

    def __init__(self, message, where=None):
        self.where = where
        super().__init__(message if where is None else f"{message} (at {where})")
