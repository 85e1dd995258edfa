"""Exception hierarchy for graphent."""


class GraphentError(Exception):
    """Base class for all errors raised by graphent."""


class DanglingEndpoint(GraphentError):
    """An edge references a vertex that is not in the vertex set."""


class DuplicateEdgeId(GraphentError):
    pass


class OracleInconsistency(GraphentError):
    """In-edge and out-edge lists of an oracle disagree."""


class LocalFinitenessViolation(GraphentError):
    """An oracle returned more edges at one vertex than the degree cap allows."""


class WindowTooSmall(GraphentError):
    """A query needs paths that may leave the materialized window."""


class InvalidParams(GraphentError):
    pass


class ParseError(GraphentError):
    pass


class UnknownFamily(GraphentError):
    pass


class AllZeroTail(GraphentError):
    """Every count in the estimation window is zero."""


class NotIrreducible(GraphentError):
    pass


class HypothesisViolated(GraphentError):
    """The input does not satisfy the hypothesis of the check being run."""


class NotInOmega(GraphentError):
    """A path pair is not a generator of the requested truncation."""


class NoCycleWarning(UserWarning):
    """The graph has no cycle; its entropy is taken to be 0."""
