"""Exception hierarchy.

Every domain failure derives from :class:`ClusterError` so the command line
can map it to exit code 1.  Input that cannot even be parsed raises
:class:`MalformedInput` (exit code 2).
"""


class ClusterError(Exception):
    """Base class for domain errors."""


class MalformedInput(ValueError):
    """Text, JSON or argument input that cannot be parsed."""


# laurent polynomials
class VarCountMismatch(ClusterError):
    pass


class NonExactDivision(ClusterError):
    """Quotient is not a Laurent polynomial.  Along a mutation path this is a bug."""


class DivisionByZero(ClusterError, ZeroDivisionError):
    pass


class ZeroAtNegativeExponent(ClusterError, ZeroDivisionError):
    pass


class ZeroPolynomial(ClusterError):
    pass


# exchange matrices and seeds
class NotSkewSymmetrizable(ClusterError):
    pass


class RankDeficient(ClusterError):
    pass


class NotExchangeable(ClusterError):
    pass


# exchange graphs
class IncompleteGraph(ClusterError):
    pass


# root systems / polytopes
class UnknownType(ClusterError):
    pass


class NonIntegerResult(ClusterError):
    pass


class HypothesisViolated(ClusterError):
    pass


class SingularClusterSystem(ClusterError):
    pass


# polygon model
class NotADiagonal(ClusterError):
    pass


class InvalidTriangulation(ClusterError):
    pass


class WrongType(ClusterError):
    pass


class RelationViolated(ClusterError):
    pass


# double Bruhat cells
class NotReduced(ClusterError):
    pass


class BadPrefix(ClusterError):
    pass


class IndexOutOfRange(ClusterError, IndexError):
    pass


class SizeMismatch(ClusterError):
    pass


class NotUnimodular(ClusterError):
    pass


class IdentityViolated(ClusterError):
    pass
