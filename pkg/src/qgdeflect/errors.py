"""Exception hierarchy shared by every module of the package."""


class DeflectionError(Exception):
    """Base class for all errors raised by qgdeflect."""


class DomainError(DeflectionError, ValueError):
    """A parameter lies outside the range where the model is defined."""


class BracketError(DeflectionError):
    """The root bracket does not straddle a sign change."""


class ToleranceError(DeflectionError):
    """An iterative method failed to converge to the requested tolerance."""


class SingularityError(DeflectionError):
    """Integration approached the pole of the corrected force law."""


class EventNotFound(DeflectionError):
    """No outgoing zero crossing of u was found within the integration range."""
