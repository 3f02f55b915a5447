"""Invariant factors of multiplicative groups (Z/nZ)^*.

Structure computations, sieve-backed counting statistics, the asymptotic
constants that govern their growth, and the series coefficients behind the
main terms, with a CLI over all of it.
"""

from .arith import Factorization, factorize, primes_upto
from .errors import (
    ConfigurationError,
    ConsistencyError,
    DomainError,
    PreconditionError,
)
from .groups import (
    carmichael,
    divides_lambda1_fast,
    invariant_factors,
    lambda1,
    least_primary_factor,
    unit_group_cyclic_orders,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError",
    "ConsistencyError",
    "DomainError",
    "Factorization",
    "PreconditionError",
    "carmichael",
    "divides_lambda1_fast",
    "factorize",
    "invariant_factors",
    "lambda1",
    "least_primary_factor",
    "primes_upto",
    "unit_group_cyclic_orders",
    "__version__",
]
