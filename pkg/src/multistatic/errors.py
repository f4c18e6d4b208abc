"""Exception types raised by the localization toolkit."""


class MultistaticError(Exception):
    """Base class for all toolkit errors."""


class DegenerateGeometry(MultistaticError):
    """A geometric quantity is undefined for the given configuration
    (e.g. target collocated with a TX, or a range inversion whose
    denominator vanishes because the target sits on the TX-RX baseline)."""


class OutOfBounds(MultistaticError):
    """A target state violates the scene's search bounds."""


class EmptyTruth(MultistaticError):
    """Measurement generation was asked to operate on zero TX-RX pairs."""


class NoUsablePairs(MultistaticError):
    """Every TX-RX pair was degenerate for position estimation."""


class InsufficientPairs(MultistaticError):
    """Fewer than two usable TX-RX pairs were available for velocity
    estimation (two unknowns need two equations)."""


class SingularGeometry(MultistaticError):
    """The velocity design matrix is numerically singular: all effective
    measurement directions are collinear."""


class EmptyInput(MultistaticError):
    """An aggregate (e.g. an RMSE) was requested over an empty sequence."""


class ParseError(MultistaticError):
    """A scenario file could not be parsed (malformed JSON)."""


class ValidationError(MultistaticError):
    """A scenario file parsed but violates the schema; the message names
    the offending field."""
