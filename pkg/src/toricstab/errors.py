"""Exception hierarchy shared by every module."""


class ToricError(Exception):
    """Base class for all errors raised by toricstab."""


class InputError(ToricError):
    """Malformed input data (bad file, wrong shapes, bad rationals)."""


class DegenerateLabelling(InputError):
    """A label is redundant, zero, or duplicates another label."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class UnboundedOrEmpty(ToricError):
    pass


class MissingLattice(ToricError):
    pass


class NotVertex(ToricError):
    pass


class EpsTooLarge(ToricError):
    pass


class SingularMatrix(ToricError):
    pass


class SingularSystem(ToricError):
    pass


class DegenerateSimplex(ToricError):
    pass


class RNotDominant(ToricError):
    pass


class NotNormalized(ToricError):
    pass


class XStarNotInterior(ToricError):
    pass


class OnBoundary(ToricError):
    pass


class NotConvexAt(ToricError):
    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class QuadratureNotConverged(ToricError):
    pass


class NoConvergence(ToricError):
    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class NotMonotone(ToricError):
    pass


class EmptyCrease(ToricError):
    pass


class NotPositive(ToricError):
    pass
