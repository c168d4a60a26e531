"""Semantic exception hierarchy shared by all lawprice modules."""


class LawPriceError(Exception):
    """Base class for all library errors."""


class ValidationError(LawPriceError):
    """Malformed input: bad construction arguments, specs, or config files."""


class SpaceMismatchError(LawPriceError):
    """Operands live on different atom spaces."""


class FlagError(LawPriceError):
    """An operation's declared-flag precondition is not met."""


class SolverError(LawPriceError):
    """Numerical solver cannot proceed: unsupported dimension, broken bracket,
    or an internal monotonicity assumption observed to fail."""
