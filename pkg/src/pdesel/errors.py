"""Exception hierarchy shared by every module."""


class SelectionError(Exception):
    """Base class for all errors raised by pdesel."""


class EmptySupport(SelectionError, ValueError):
    pass


class RankDeficient(SelectionError):
    """Selected columns (plus intercept) are numerically collinear."""


class ExactFit(SelectionError):
    """Residual sum of squares is zero, so the Gaussian likelihood is unbounded."""


class NegativeUncertainty(SelectionError, ValueError):
    pass


class NotPositiveDefinite(SelectionError, ValueError):
    pass


class MixedCriteria(SelectionError, ValueError):
    pass


class UnstableCoefficient(SelectionError):
    """Bootstrap mean of a coefficient is ~0, so its coefficient of variation is undefined."""


class ZeroIntercept(SelectionError):
    pass


class DegenerateU(SelectionError, ValueError):
    pass


class UnstableSimulation(SelectionError):
    pass


class TooFewInteriorPoints(SelectionError, ValueError):
    pass
