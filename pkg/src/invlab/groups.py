"""Structure of the multiplicative group (Z/nZ)^*.

The group splits over the prime powers of n into cyclic pieces with known
orders; aligning prime-power parts of those orders yields the invariant
factor chain d_1 | d_2 | ... | d_l. The first link is the quantity the rest
of the package counts, and divides_lambda1_fast reads q | d_1 straight off
the factorization of n without building the chain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .arith import Factorization, factorize
from .errors import DomainError, PreconditionError

__all__ = [
    "CyclicDecomposition",
    "InvariantFactors",
    "carmichael",
    "divides_lambda1_fast",
    "invariant_factors",
    "lambda1",
    "least_primary_factor",
    "q_divides_lambda1_structural",
    "unit_group_cyclic_orders",
]


@dataclass(frozen=True)
class CyclicDecomposition:
    """Orders of one cyclic decomposition, unordered; entries of 1 allowed."""

    orders: tuple[int, ...]


@dataclass(frozen=True)
class InvariantFactors:
    """Canonical chain d_1 | d_2 | ... | d_l with every d_j >= 2."""

    chain: tuple[int, ...]


def unit_group_cyclic_orders(f: Factorization) -> CyclicDecomposition:
    """Cyclic orders of (Z/nZ)^* from n's factorization.

    Odd p^e contributes one cyclic factor of order (p-1)p^(e-1); the 2-part
    contributes 1, 2, or the pair {2, 2^(e-2)} for e = 1, 2, >= 3.
    """
    orders: list[int] = []
    for p, e in f.factors:
        if p == 2:
            if e == 1:
                orders.append(1)
            elif e == 2:
                orders.append(2)
            else:
                orders.append(2)
                orders.append(2 ** (e - 2))
        else:
            orders.append((p - 1) * p ** (e - 1))
    return CyclicDecomposition(tuple(orders))


def invariant_factors(c: CyclicDecomposition) -> InvariantFactors:
    """Divisor chain of the abelian group prod_i C_{m_i}.

    Split every order into prime powers; per prime, sort the exponents so
    the j-th largest power of each prime lands in the j-th factor from the
    top of the chain. Trailing trivial factors are dropped.
    """
    exps: dict[int, list[int]] = {}
    for m in c.orders:
        if m == 1:
            continue
        for p, e in factorize(m).factors:
            exps.setdefault(p, []).append(e)
    if not exps:
        return InvariantFactors(())
    ell = max(len(v) for v in exps.values())
    chain = [1] * ell
    for p, v in exps.items():
        for j, e in enumerate(sorted(v, reverse=True)):
            chain[ell - 1 - j] *= p**e
    return InvariantFactors(tuple(d for d in chain if d > 1))


def lambda1(n: int) -> int:
    """Smallest invariant factor of (Z/nZ)^*; 1 for n in {1, 2}."""
    if n < 1:
        raise DomainError(f"lambda1 needs n >= 1, got {n}")
    chain = invariant_factors(unit_group_cyclic_orders(factorize(n))).chain
    return chain[0] if chain else 1


def carmichael(n: int) -> int:
    """Exponent of (Z/nZ)^*: the largest invariant factor."""
    if n < 1:
        raise DomainError(f"carmichael needs n >= 1, got {n}")
    chain = invariant_factors(unit_group_cyclic_orders(factorize(n))).chain
    return chain[-1] if chain else 1


def least_primary_factor(n: int) -> int:
    """Smallest prime-power order among the primary cyclic components.

    Splitting each invariant factor into prime powers refines the chain into
    primary cyclic pieces C_{p^e}; this is the least such p^e, or 1 when the
    group is trivial.
    """
    if n < 1:
        raise DomainError(f"least_primary_factor needs n >= 1, got {n}")
    best = 0
    for m in unit_group_cyclic_orders(factorize(n)).orders:
        if m == 1:
            continue
        for p, e in factorize(m).factors:
            pe = p**e
            if best == 0 or pe < best:
                best = pe
    return best if best else 1


def q_divides_lambda1_structural(c: CyclicDecomposition, q: int) -> bool:
    """Whether q divides the smallest invariant factor, via the chain.

    Requires the orders to share a common factor > 1 (so the chain has full
    length and d_1 is their gcd); decompositions without one must be routed
    through invariant_factors directly.
    """
    g = 0
    for m in c.orders:
        g = math.gcd(g, m)
    if g <= 1:
        raise PreconditionError(
            "cyclic orders share no common factor > 1; build the chain instead"
        )
    chain = invariant_factors(c).chain
    lam1 = chain[0] if chain else 1
    return lam1 % q == 0


def divides_lambda1_fast(f: Factorization, q: int) -> bool:
    """Decide q | lambda1(n) from the factorization of n, for even q >= 4.

    n qualifies iff 4 does not divide n, every prime of n coprime to q is
    1 mod q, and each odd prime p | q either misses n entirely or divides it
    to order strictly above v_p(q) while q / p^v_p(q) divides p - 1.
    """
    if q < 4 or q % 2:
        raise DomainError(f"predicate is defined for even q >= 4, got {q}")
    if f.n <= 2:
        return False
    for p, e in f.factors:
        if p == 2:
            if e >= 2:
                return False
        elif q % p == 0:
            r = 0
            cofactor = q
            while cofactor % p == 0:
                cofactor //= p
                r += 1
            if (p - 1) % cofactor != 0 or e < r + 1:
                return False
        elif p % q != 1:
            return False
    return True
