"""Exception hierarchy for the package.

Every error derives from :class:`RicciError`, itself a ``ValueError``, so
callers that only care about "bad input" can catch the builtin.
"""


class RicciError(ValueError):
    pass


class InvalidSize(RicciError):
    pass


class DisconnectedGraph(RicciError):
    pass


class IsolatedVertex(RicciError):
    pass


class NotStochastic(RicciError):
    pass


class NotIrreducible(RicciError):
    pass


class NotReversible(RicciError):
    pass


class NegativeInput(RicciError):
    pass


class NonpositiveInput(RicciError):
    pass


class NegativeTime(RicciError):
    pass


class NonpositiveDensity(RicciError):
    pass


class NotNormalized(RicciError):
    pass


class DegenerateA(RicciError):
    pass


class SolverFailure(RicciError):
    pass


class VacuousBound(RicciError):
    pass


class InvalidDegree(RicciError):
    pass


class NotSRW(RicciError):
    pass


class NonpositiveKappa(RicciError):
    pass
