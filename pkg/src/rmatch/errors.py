"""Exception hierarchy for rmatch."""


class RMatchError(Exception):
    """Base class for every error raised by this package."""


class InvalidTuple(RMatchError, ValueError):
    pass


class InvalidQuery(RMatchError, ValueError):
    pass


class InvalidHypergraph(RMatchError, ValueError):
    pass


class InvalidSides(RMatchError, ValueError):
    pass


class InvalidSubset(RMatchError, ValueError):
    pass


class UnsupportedArity(RMatchError, ValueError):
    pass


class InvalidMatching(RMatchError, ValueError):
    pass


class NothingToContract(RMatchError, ValueError):
    pass


class NotLatin(RMatchError, ValueError):
    pass


class NotACover(RMatchError, ValueError):
    pass


class ConditionViolated(RMatchError):
    """A solver precondition does not hold; ``report`` carries the witnesses."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class HypothesisViolated(RMatchError):
    """A counting step of the exchange argument found no candidate.

    ``witness`` is a legal tuple whose degree is below the required bound,
    ``degree`` its degree and ``strict`` whether the bound was ``> n/2``.
    """

    def __init__(self, message, witness=None, degree=None, strict=None):
        super().__init__(message)
        self.witness = witness
        self.degree = degree
        self.strict = strict


class NoNearPerfectFound(RMatchError):
    pass


class BudgetExhausted(RMatchError):
    """The oracle ran out of search nodes.

    ``best`` is the largest matching seen so far; it is a lower bound only.
    """

    def __init__(self, message, best=None, nodes=0):
        super().__init__(message)
        self.best = best
        self.nodes = nodes


class Unbounded(RMatchError):
    pass


class Infeasible(RMatchError):
    pass
