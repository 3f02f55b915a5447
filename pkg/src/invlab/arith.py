"""Integer plumbing: factorization, primality, segmented least-prime-factor
sieves, multiplicative orders, and primitive roots.

Everything here is exact integer arithmetic at 64-bit desk scale. Trial
division with a 2/3 wheel is entirely adequate for the operand sizes this
package meets (n up to ~10^12 in the odd corner cases, ~10^8 in bulk);
nothing cryptographic lives here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import ConfigurationError, DomainError

__all__ = [
    "Factorization",
    "SieveSegment",
    "factorize",
    "is_prime",
    "lpf_segment",
    "ord_mod",
    "primes_upto",
    "primitive_root",
    "totient",
]


_prime_cache: dict = {"limit": 1, "primes": np.empty(0, dtype=np.int64)}


def primes_upto(n: int) -> np.ndarray:
    """All primes <= n, ascending, as int64. Treat the result as read-only.

    The largest sieve computed so far is kept and sliced for smaller n, so
    repeated calls are cheap.
    """
    if n < 2:
        return np.empty(0, dtype=np.int64)
    if n > _prime_cache["limit"]:
        sieve = np.ones(n + 1, dtype=bool)
        sieve[:2] = False
        for p in range(2, math.isqrt(n) + 1):
            if sieve[p]:
                sieve[p * p :: p] = False
        _prime_cache["primes"] = np.flatnonzero(sieve).astype(np.int64)
        _prime_cache["limit"] = n
    primes = _prime_cache["primes"]
    return primes[: int(np.searchsorted(primes, n, side="right"))]


@dataclass(frozen=True)
class Factorization:
    """n as an ordered product of prime powers; factors empty for n = 1."""

    n: int
    factors: tuple[tuple[int, int], ...]


def factorize(n: int) -> Factorization:
    if n < 1:
        raise DomainError(f"factorize needs n >= 1, got {n}")
    m = n
    out = []
    for p in (2, 3):
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
    d = 5
    step = 2  # alternates 2, 4: hits 6k +- 1
    while d * d <= m:
        if m % d == 0:
            e = 0
            while m % d == 0:
                m //= d
                e += 1
            out.append((d, e))
        d += step
        step = 6 - step
    if m > 1:
        out.append((m, 1))
    return Factorization(n, tuple(out))


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0 or n % 3 == 0:
        return False
    d = 5
    step = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += step
        step = 6 - step
    return True


def totient(n: int) -> int:
    phi = 1
    for p, e in factorize(n).factors:
        phi *= (p - 1) * p ** (e - 1)
    return phi


@dataclass(frozen=True)
class SieveSegment:
    """Least prime factors for the window [lo, hi); lpf[i] is lpf(lo + i)."""

    lo: int
    hi: int
    lpf: np.ndarray


@njit(nogil=True, cache=True)
def _lpf_fill(lo, hi, base_primes, lpf):  # pragma: no cover - jit body
    for i in range(hi - lo):
        lpf[i] = 0
    for bi in range(base_primes.size):
        p = base_primes[bi]
        if p * p >= hi:
            break
        start = ((lo + p - 1) // p) * p
        if start < p * p:
            start = p * p
        for m in range(start, hi, p):
            if lpf[m - lo] == 0:
                lpf[m - lo] = p
    for i in range(hi - lo):
        if lpf[i] == 0:
            lpf[i] = lo + i


def lpf_segment(lo: int, hi: int, base_primes: np.ndarray) -> SieveSegment:
    """Sieve least prime factors over [lo, hi) using the supplied base primes.

    base_primes must contain every prime <= sqrt(hi - 1); anything beyond
    that is tolerated and ignored.
    """
    if not 2 <= lo < hi:
        raise DomainError(f"need 2 <= lo < hi, got [{lo}, {hi})")
    base = np.asarray(base_primes, dtype=np.int64)
    need = primes_upto(math.isqrt(hi - 1))
    missing = np.setdiff1d(need, base)
    if missing.size:
        raise ConfigurationError(
            f"base primes do not cover sqrt({hi - 1}); first missing: {missing[0]}"
        )
    lpf = np.empty(hi - lo, dtype=np.int64)
    _lpf_fill(lo, hi, need, lpf)
    return SieveSegment(lo, hi, lpf)


def ord_mod(p: int, q: int) -> int:
    """Multiplicative order of p modulo q, for gcd(p, q) = 1 and q >= 3."""
    if q < 3:
        raise DomainError(f"ord_mod needs q >= 3, got {q}")
    a = p % q
    if math.gcd(a, q) != 1:
        raise DomainError(f"ord_mod needs gcd(p, q) = 1, got p={p}, q={q}")
    k = totient(q)
    # shrink k by every prime it contains while the power still fixes 1
    for r, _ in factorize(k).factors:
        while k % r == 0 and pow(a, k // r, q) == 1:
            k //= r
    return k


def primitive_root(pk: int) -> int:
    """Smallest generator of (Z/p^k Z)^* for an odd prime power p^k."""
    f = factorize(pk).factors
    if len(f) != 1 or f[0][0] == 2:
        raise DomainError(f"primitive_root needs an odd prime power, got {pk}")
    phi = totient(pk)
    radicals = [r for r, _ in factorize(phi).factors]
    g = 2
    while True:
        if math.gcd(g, pk) == 1 and all(
            pow(g, phi // r, pk) != 1 for r in radicals
        ):
            return g
        g += 1
