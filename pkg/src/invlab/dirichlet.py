"""Dirichlet characters mod q and their L(1, chi) special values.

Characters are built on explicit generators of (Z/qZ)^* obtained by CRT over
the prime powers of q (primitive root for odd p^k; -1 and 5 for 2^r). A
character is a twist vector against those generators, and its values are
stored as exact rational rotations t/d standing for exp(2 pi i t/d), so
conjugation and orthogonality sums are exact until rendered as complex.

L(1, chi) for non-principal chi comes from the finite sum

    L(1, chi) = -(1/q) * sum_{a=1}^{q-1} chi(a) psi(a/q),

with the digamma values at rationals given by Gauss's closed form. log_L1
additionally pins the imaginary part to the branch continued from the Euler
product, which matters when the logarithm is weighted by a non-integer
coefficient.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .arith import factorize, primes_upto, primitive_root, totient
from .errors import ConsistencyError, DomainError

__all__ = [
    "DirichletCharacter",
    "UnitGroupBasis",
    "L1",
    "character_table",
    "gauss_digamma",
    "log_L1",
    "unit_group_basis",
]

EULER_GAMMA = 0.5772156649015328606


def _crt_lift(a: int, m: int, q: int) -> int:
    """x mod q with x = a mod m and x = 1 mod q/m, for m | q, gcd(m, q/m)=1."""
    cof = q // m
    t = (a - 1) * pow(cof, -1, m) % m
    return (1 + cof * t) % q


@dataclass(frozen=True)
class UnitGroupBasis:
    """Generators (g_i, order e_i) of (Z/qZ)^* and the discrete log table.

    dlog maps every reduced residue to its exponent vector; prod e_i = phi(q).
    """

    q: int
    generators: tuple[tuple[int, int], ...]
    dlog: dict

    @property
    def orders(self) -> tuple[int, ...]:
        return tuple(e for _, e in self.generators)


@lru_cache(maxsize=None)
def unit_group_basis(q: int) -> UnitGroupBasis:
    if q < 3:
        raise DomainError(f"unit group basis needs q >= 3, got {q}")
    gens: list[tuple[int, int]] = []
    for p, e in factorize(q).factors:
        pk = p**e
        if p == 2:
            if e == 1:
                continue
            gens.append((_crt_lift(pk - 1, pk, q), 2))
            if e >= 3:
                gens.append((_crt_lift(5, pk, q), 2 ** (e - 2)))
        else:
            gens.append((_crt_lift(primitive_root(pk), pk, q), totient(pk)))
    if not gens:  # q = 4 handled above; only q = 3, 4, 6 reach a single gen
        gens = []
    dlog: dict[int, tuple[int, ...]] = {}
    for tup in itertools.product(*(range(e) for _, e in gens)):
        v = 1
        for (g, _), a in zip(gens, tup):
            v = v * pow(g, a, q) % q
        dlog[v] = tup
    if len(dlog) != totient(q):
        raise ConsistencyError(
            f"generator set for q={q} spans {len(dlog)} of {totient(q)} residues"
        )
    return UnitGroupBasis(q, tuple(gens), dlog)


@dataclass(frozen=True)
class DirichletCharacter:
    """chi determined by chi(g_i) = exp(2 pi i t_i / e_i) on the basis."""

    q: int
    twist: tuple[int, ...]

    @property
    def is_principal(self) -> bool:
        return not any(self.twist)

    def conjugate(self) -> "DirichletCharacter":
        orders = unit_group_basis(self.q).orders
        return DirichletCharacter(
            self.q, tuple((-t) % e for t, e in zip(self.twist, orders))
        )

    def rotation(self, a: int) -> Fraction | None:
        """Exact r in [0, 1) with chi(a) = exp(2 pi i r); None off the units."""
        basis = unit_group_basis(self.q)
        vec = basis.dlog.get(a % self.q)
        if vec is None:
            return None
        r = Fraction(0)
        for t, x, e in zip(self.twist, vec, basis.orders):
            r += Fraction(t * x, e)
        return r % 1

    def value(self, a: int) -> complex:
        r = self.rotation(a)
        if r is None:
            return 0j
        if r.denominator == 1:
            return 1 + 0j
        if r.denominator == 2:
            return -1 + 0j
        if r.denominator == 4:
            return 1j if r.numerator == 1 else -1j
        return cmath.exp(2j * math.pi * (r.numerator / r.denominator))


def character_table(q: int) -> list[DirichletCharacter]:
    """All phi(q) characters mod q, principal first."""
    basis = unit_group_basis(q)
    return [
        DirichletCharacter(q, tup)
        for tup in itertools.product(*(range(e) for e in basis.orders))
    ]


def gauss_digamma(a: int, q: int) -> float:
    """psi(a/q) for 0 < a < q as a finite sum of logs and a cotangent."""
    if not 0 < a < q:
        raise DomainError(f"need 0 < a < q, got a={a}, q={q}")
    x = math.pi * a / q
    s = -EULER_GAMMA - math.log(2 * q) - math.pi / (2 * math.tan(x))
    for k in range(1, (q - 1) // 2 + 1):
        s += 2.0 * math.cos(2 * math.pi * k * a / q) * math.log(
            math.sin(math.pi * k / q)
        )
    return s


@lru_cache(maxsize=None)
def _digamma_row(q: int) -> tuple[float, ...]:
    return tuple(gauss_digamma(a, q) for a in range(1, q))


def L1(chi: DirichletCharacter) -> complex:
    """L(1, chi) for non-principal chi, exact finite digamma sum."""
    if chi.is_principal:
        raise DomainError("L(s, chi) has a pole at s = 1 for principal chi")
    psi = _digamma_row(chi.q)
    total = 0j
    for a in range(1, chi.q):
        v = chi.value(a)
        if v:
            total += v * psi[a - 1]
    return -total / chi.q


def _euler_log_estimate(chi: DirichletCharacter, cutoff: int = 100_000) -> complex:
    """Truncated sum_p sum_k chi(p)^k / (k p^k), accurate to well under pi.

    k = 1 is summed per residue class over all p <= cutoff; the k >= 2 tail
    only needs the small primes since sum_{p > B} p^-2 < 1/(B-1).
    """
    q = chi.q
    primes = primes_upto(cutoff)
    vals = np.array([chi.value(a) for a in range(q)])
    s1 = np.zeros(q)
    np.add.at(s1, primes % q, 1.0 / primes)
    total = complex(np.dot(vals, s1))
    for p in primes[primes < 1000]:
        c = vals[p % q]
        if not c:
            continue
        ck = c
        for k in range(2, 64):
            ck *= c
            term = ck / (k * float(p) ** k)
            total += term
            if abs(term) < 1e-13:
                break
    return total


def log_L1(chi: DirichletCharacter) -> complex:
    """log L(1, chi) on the branch continued from the Euler product.

    The finite digamma sum fixes the value; the winding number is the integer
    that moves the principal imaginary part closest to the truncated Euler
    log, whose error is far below the pi of slack available.
    """
    base = cmath.log(L1(chi))
    est = _euler_log_estimate(chi).imag
    m = round((est - base.imag) / (2 * math.pi))
    return complex(base.real, base.imag + 2 * math.pi * m)
