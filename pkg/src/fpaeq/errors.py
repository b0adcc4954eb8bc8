class DomainError(ValueError):
    """An argument lies outside the operation's domain."""


class PrecisionError(RuntimeError):
    """A bisection step budget was exhausted before reaching the target residual."""


class ConsistencyError(ValueError):
    """Two precomputed tables do not belong to the same distribution / parameters."""
