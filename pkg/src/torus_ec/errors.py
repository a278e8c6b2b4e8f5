"""Exception types raised by the library."""


class TorusError(Exception):
    """Base class for every error raised by torus_ec."""


class InvalidParameters(TorusError, ValueError):
    pass


class DegenerateDimension(TorusError):
    pass


class NotAdjacentPlanes(TorusError):
    pass


class NotInPlane(TorusError):
    pass


class SameEdge(TorusError, ValueError):
    pass


class ColorOutOfRange(TorusError, ValueError):
    pass


class StartNotInColors(TorusError):
    pass


class StaleComponent(TorusError):
    pass


class ConflictWithExisting(TorusError):
    pass


class BoundaryConflict(TorusError):
    pass


class OverlappingDomains(TorusError):
    pass


class PreconditionViolated(TorusError):
    pass


class AllListsIdentical(TorusError):
    pass


class ImproperPrecoloring(TorusError):
    pass


class BudgetExceeded(TorusError):
    pass


class HypothesisNotMet(TorusError):
    pass


class UnsupportedGirth(TorusError):
    pass


class ClaimViolated(TorusError):
    pass


class OddCycleLength(TorusError):
    pass


class NeighborhoodDisturbed(TorusError):
    pass


class NotDistance4Matching(TorusError):
    pass


class ConstructionNotFound(TorusError):
    pass


class NotExtendable(TorusError):
    """The oracle proved that a precoloring has no extension."""


class ParseError(TorusError, ValueError):
    pass


class TheoremViolation(TorusError):
    """A precoloring inside the theorem bounds turned out non-extendable.

    Should never happen; raised loudly instead of returning a bad result.
    """
