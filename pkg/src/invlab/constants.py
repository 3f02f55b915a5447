"""Asymptotic constants for the counting statistics.

Every constant is an Euler-type product over primes, truncated at a cutoff P
and wrapped in a ConstantEstimate carrying a rigorous truncation bound: each
omitted factor (1 - p^-k)^(1/k) with k >= 2 contributes at most 2 p^-2 / k
to |log|, so the absolute tail of the log is below sum_{p > P} p^-2 <
1/(P - 1) and the value error is below value * expm1(1/(P-1)). Enlarging P
only multiplies in factors below 1, so estimates decrease monotonically
toward the limit.

G_q governs the count of n whose primes are all 1 mod q; H_q its lambda_1
counterpart; G_B1 the general version for n with all primes in a residue
class set B. H4/H6 also exist in closed form up to a quadratic Euler
product, which the tests hold against the character route.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .arith import factorize, is_prime, ord_mod, primes_upto, totient
from .dirichlet import L1, character_table, log_L1
from .errors import ConfigurationError, ConsistencyError, DomainError

__all__ = [
    "ConstantEstimate",
    "ResidueClassSet",
    "DEFAULT_CUTOFF",
    "G_B1",
    "G_q",
    "H4_closed",
    "H6_closed",
    "H_q",
    "euler_ord_product",
    "gamma_real",
    "ibr_adjust",
    "main_term",
    "main_term_constant",
]

DEFAULT_CUTOFF = 10**7


@dataclass(frozen=True)
class ConstantEstimate:
    """A truncated-product value with its truncation error bound."""

    value: float
    error_bound: float
    truncation_P: int

    def scaled(self, factor: float) -> "ConstantEstimate":
        return ConstantEstimate(
            self.value * factor, self.error_bound * abs(factor), self.truncation_P
        )


@dataclass(frozen=True)
class ResidueClassSet:
    """A nonempty set B of reduced residue classes mod q, q >= 3."""

    q: int
    members: frozenset[int]

    def __post_init__(self):
        if self.q < 3:
            raise DomainError(f"residue classes need q >= 3, got {self.q}")
        members = frozenset(b % self.q for b in self.members)
        if not members:
            raise DomainError("residue class set must be nonempty")
        for b in members:
            if math.gcd(b, self.q) != 1:
                raise DomainError(f"class {b} is not coprime to {self.q}")
        object.__setattr__(self, "members", members)

    @property
    def beta(self) -> float:
        """Density |B| / phi(q) of primes landing in B."""
        return len(self.members) / totient(self.q)

    @property
    def complement(self) -> "ResidueClassSet":
        rest = frozenset(
            a for a in range(1, self.q)
            if math.gcd(a, self.q) == 1 and a not in self.members
        )
        if not rest:
            raise DomainError("complement of the full class set is empty")
        return ResidueClassSet(self.q, rest)


def _tail_bound(value: float, P: int) -> float:
    return abs(value) * math.expm1(1.0 / (P - 1))


def gamma_real(x: float) -> float:
    """Gamma on the positive real axis."""
    if x <= 0:
        raise DomainError(f"gamma_real needs x > 0, got {x}")
    return math.gamma(x)


def _check_even_q(q: int) -> None:
    if q < 4 or q % 2:
        raise DomainError(
            f"constant is defined for even q >= 4, got {q}"
            + (" (q = 2 would count almost all n)" if q == 2 else "")
        )


@lru_cache(maxsize=None)
def _residue_orders(q: int) -> tuple[int, ...]:
    """ord_q(a) for a in [0, q), 0 on the non-units."""
    out = [0] * q
    for a in range(1, q):
        if math.gcd(a, q) == 1:
            out[a] = ord_mod(a, q)
    return tuple(out)


def euler_ord_product(q: int, P: int = DEFAULT_CUTOFF) -> ConstantEstimate:
    """prod over p <= P, p coprime to q, p != 1 mod q of (1-p^-ord)^(1/ord)."""
    _check_even_q(q)
    if P < q:
        raise ConfigurationError(f"cutoff P={P} below modulus q={q}")
    primes = primes_upto(P)
    res = primes % q
    orders = np.array(_residue_orders(q), dtype=np.int64)
    log_sum = 0.0
    for k in sorted(set(orders.tolist())):
        if k <= 1:
            continue  # non-units and the class of 1 are excluded
        classes = np.flatnonzero(orders == k)
        sel = primes[np.isin(res, classes)].astype(np.float64)
        if sel.size:
            log_sum += float(np.log1p(-(sel ** float(-k))).sum()) / k
    value = math.exp(log_sum)
    return ConstantEstimate(value, _tail_bound(value, P), P)


def G_q(q: int, P: int = DEFAULT_CUTOFF) -> ConstantEstimate:
    """Constant in front of x (log x)^(1/phi(q) - 1) for counts of n with
    all primes 1 mod q:

        G_q = 1/Gamma(1/phi(q))
              * [ (phi(q)/q) prod_{chi != chi0} L(1, chi) ]^(1/phi(q))
              * prod_{p coprime q, p != 1 mod q} (1 - p^-ord)^(1/ord).
    """
    _check_even_q(q)
    phi = totient(q)
    prod = complex(1)
    for chi in character_table(q):
        if not chi.is_principal:
            prod *= L1(chi)
    if abs(prod.imag) > 1e-10 * max(1.0, abs(prod.real)):
        raise ConsistencyError(
            f"character product for q={q} is not real: {prod}"
        )
    inner = (phi / q) * prod.real
    if inner <= 0:
        raise ConsistencyError(f"non-positive L-product for q={q}: {inner}")
    head = inner ** (1.0 / phi) / gamma_real(1.0 / phi)
    euler = euler_ord_product(q, P)
    return euler.scaled(head)


def _h_extra_factor(q: int) -> float:
    """1 + 1/(p^r (p-1)) when a unique odd p^r || q has q/p^r | p - 1, else 1."""
    hits = []
    for p, r in factorize(q).factors:
        if p == 2:
            continue
        if (p - 1) % (q // p**r) == 0:
            hits.append((p, r))
    if len(hits) > 1:
        raise ConsistencyError(
            f"q={q}: multiple odd prime powers qualify, which cannot happen"
        )
    if hits:
        p, r = hits[0]
        return 1.0 + 1.0 / (p**r * (p - 1))
    return 1.0


def H_q(q: int, P: int = DEFAULT_CUTOFF) -> ConstantEstimate:
    """Constant for the count of n with q | lambda_1(n): (3/2) G_q times the
    single-prime correction factor when one odd p^r || q has q/p^r | p - 1."""
    return G_q(q, P).scaled(1.5 * _h_extra_factor(q))


def H4_closed(P: int = DEFAULT_CUTOFF) -> ConstantEstimate:
    """H_4 in closed form: 3/2^(5/2) * prod_{p = 3 mod 4} (1 - p^-2)^(1/2)."""
    if P < 7:
        raise ConfigurationError(f"cutoff P={P} too small, need P >= 7")
    primes = primes_upto(P)
    sel = primes[primes % 4 == 3].astype(np.float64)
    value = 3 / 2**2.5 * math.exp(0.5 * float(np.log1p(-(sel**-2.0)).sum()))
    return ConstantEstimate(value, _tail_bound(value, P), P)


def H6_closed(P: int = DEFAULT_CUTOFF) -> ConstantEstimate:
    """H_6 in closed form: 7/(2^(5/2) 3^(3/4)) * prod_{p = 5 mod 6} (1 - p^-2)^(1/2)."""
    if P < 7:
        raise ConfigurationError(f"cutoff P={P} too small, need P >= 7")
    primes = primes_upto(P)
    sel = primes[primes % 6 == 5].astype(np.float64)
    value = (
        7 / (2**2.5 * 3**0.75)
        * math.exp(0.5 * float(np.log1p(-(sel**-2.0)).sum()))
    )
    return ConstantEstimate(value, _tail_bound(value, P), P)


@lru_cache(maxsize=8)
def _class_power_sums(q: int, P: int):
    """S_k[a] = sum of p^-k over primes p <= P with p = a mod q, k >= 2."""
    primes = primes_upto(P)
    res = primes % q
    pf = primes.astype(np.float64)
    out = {}
    for k in range(2, 64):
        cut = 1e19 ** (1.0 / k)
        m = int(np.searchsorted(pf, cut))
        if m == 0:
            break
        out[k] = np.bincount(res[:m], weights=pf[:m] ** float(-k), minlength=q)
    return out


def G_B1(B: ResidueClassSet, P: int = DEFAULT_CUTOFF) -> ConstantEstimate:
    """Constant for counts of n >= 1 all of whose primes lie in B mod q.

    G_B(1)^phi(q) = A_B(1) * prod_{p | q} (1 - 1/p)^|B|
                    * exp( sum_{chi != chi0} S_chi log L(1, chi) ),

    with S_chi = sum_{b in B} conj(chi(b)) and

    log A_B(1) = phi(q) * sum_{p not | q} sum_{k >= 2}
                 ([p in B] - [p^k in B]) p^-k / k,

    where [.] tests the class mod q. S_chi is generally not an integer, so
    each log L(1, chi) must sit on the Euler-product branch; the imaginary
    parts of conjugate pairs then cancel exactly.
    """
    q = B.q
    if P < q:
        raise ConfigurationError(f"cutoff P={P} below modulus q={q}")
    phi = totient(q)
    expo = complex(0)
    for chi in character_table(q):
        if chi.is_principal:
            continue
        s_chi = sum(chi.value(b).conjugate() for b in B.members)
        expo += s_chi * log_L1(chi)
    if abs(expo.imag) > 1e-10:
        raise ConsistencyError(
            f"paired character exponent sum has imaginary part {expo.imag}"
        )
    in_b = np.zeros(q)
    for b in B.members:
        in_b[b] = 1.0
    log_a = 0.0
    for k, sums in _class_power_sums(q, P).items():
        w = in_b - in_b[[pow(a, k, q) for a in range(q)]]
        log_a += float(np.dot(w, sums)) / k
    log_a *= phi
    log_total = (
        log_a
        + len(B.members)
        * sum(math.log1p(-1.0 / p) for p, _ in factorize(q).factors)
        + expo.real
    ) / phi
    value = math.exp(log_total)
    return ConstantEstimate(value, _tail_bound(value, P), P)


def ibr_adjust(
    c: ConstantEstimate, inserted: list[int], removed: list[int]
) -> ConstantEstimate:
    """Move individual primes in or out of the qualifying set.

    Inserting a prime p multiplies the count's constant by (1 - 1/p)^-1;
    removing b multiplies by (1 - 1/b). Only primes are accepted.
    """
    factor = 1.0
    for p in inserted:
        if not is_prime(p):
            raise DomainError(f"inserted value {p} is not prime")
        factor /= 1.0 - 1.0 / p
    for b in removed:
        if not is_prime(b):
            raise DomainError(f"removed value {b} is not prime")
        factor *= 1.0 - 1.0 / b
    return c.scaled(factor)


def main_term_constant(
    statistic: str,
    q: int | None = None,
    B: ResidueClassSet | None = None,
    P: int = DEFAULT_CUTOFF,
) -> tuple[ConstantEstimate, float]:
    """Constant estimate and log-power for a statistic's main term c x / (log x)^power.

    statistic: one of T, E, D, J, NB, LP. T needs nothing further; E/D/J
    need q; NB needs B; LP is the q = 4 divisibility count shifted by a
    constant, so it shares H_4.
    """
    if statistic == "T":
        h4 = H_q(4, P)
        h6 = H_q(6, P)
        est = ConstantEstimate(
            h4.value + h6.value, h4.error_bound + h6.error_bound, P
        )
        return est, 0.5
    if statistic in ("E", "D"):
        if q is None:
            raise DomainError(f"statistic {statistic} needs q")
        return H_q(q, P), 1.0 - 1.0 / totient(q)
    if statistic == "J":
        if q is None:
            raise DomainError("statistic J needs q")
        _check_even_q(q)
        return G_q(q, P), 1.0 - 1.0 / totient(q)
    if statistic == "NB":
        if B is None:
            raise DomainError("statistic NB needs a residue class set")
        beta = B.beta
        return G_B1(B, P).scaled(1.0 / gamma_real(beta)), 1.0 - beta
    if statistic == "LP":
        return H_q(4, P), 1.0 - 1.0 / totient(4)
    raise DomainError(f"unknown statistic {statistic!r}")


def main_term(
    statistic: str,
    x: float,
    q: int | None = None,
    B: ResidueClassSet | None = None,
    P: int = DEFAULT_CUTOFF,
) -> float:
    """Asymptotic main term of the statistic at x; defined for x >= 3."""
    if x < 3:
        raise DomainError(f"main term needs x >= 3, got {x}")
    est, power = main_term_constant(statistic, q=q, B=B, P=P)
    return est.value * x / math.log(x) ** power
