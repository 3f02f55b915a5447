"""Exception types shared across the library."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class ConfigurationError(ValueError):
    """A tuning parameter (cutoff, depth, segment size) is unusable."""


class PreconditionError(ValueError):
    """A documented structural precondition was violated."""


class ConsistencyError(RuntimeError):
    """Two supposedly equivalent computations disagreed."""
