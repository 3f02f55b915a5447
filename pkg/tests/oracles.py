"""Independent brute-force oracles used to fix expected values.

Nothing in this module imports the package under test. The group-structure
oracle works directly on the elements of (Z/nZ)^*, recovering each p-Sylow
type from the counts of solutions of x^(p^k) = 1, so it shares no code path
with the CRT-based construction it is used to check. The counting oracles
factor integers by raw trial division. The Stieltjes oracle evaluates the
Euler-Maclaurin tail with exact derivative polynomials for f(t) = ln^n(t)/t.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def trial_division(n: int) -> list[tuple[int, int]]:
    """Factorization of n >= 1 by the dumbest possible loop."""
    out = []
    m = n
    d = 2
    while d * d <= m:
        if m % d == 0:
            e = 0
            while m % d == 0:
                m //= d
                e += 1
            out.append((d, e))
        d += 1
    if m > 1:
        out.append((m, 1))
    return out


def group_structure(n: int) -> dict:
    """Structure of (Z/nZ)^* from element orders alone.

    Returns the invariant factor chain, the group exponent (max element
    order, computed independently of the chain), |G|, and the least
    prime-power order among primary components.
    """
    if n <= 2:
        return {"chain": [], "exponent": 1, "order": 1, "least_primary": 1}
    els = [a for a in range(1, n) if gcd(a, n) == 1]
    order = len(els)

    ptypes: dict[int, list[int]] = {}
    for p, _ in trial_division(order):
        # s_k with p^{s_k} = #{x : x^(p^k) = 1}; conjugate partition gives the type
        s = [0]
        k = 1
        while True:
            c = sum(1 for x in els if pow(x, p**k, n) == 1)
            sk = 0
            while p**sk < c:
                sk += 1
            assert p**sk == c, "solution count of x^(p^k)=1 must be a power of p"
            if sk == s[-1]:
                break
            s.append(sk)
            k += 1
        parts = [s[k] - s[k - 1] for k in range(1, len(s))]  # #{i: e_i >= k}
        exps = [sum(1 for c in parts if c > i) for i in range(parts[0])]
        ptypes[p] = sorted(exps, reverse=True)

    ell = max(len(v) for v in ptypes.values())
    chain = [1] * ell
    for p, exps in ptypes.items():
        padded = exps + [0] * (ell - len(exps))
        for j in range(ell):
            chain[ell - 1 - j] *= p ** padded[j]
    chain = [d for d in chain if d > 1]

    exponent = 1
    for x in els:
        k = 1
        y = x
        while y != 1:
            y = y * x % n
            k += 1
        if k > exponent:
            exponent = k

    least_primary = min(p**e for p, exps in ptypes.items() for e in exps)
    return {
        "chain": chain,
        "exponent": exponent,
        "order": order,
        "least_primary": least_primary,
    }


def lambda1_oracle(n: int) -> int:
    ch = group_structure(n)["chain"]
    return ch[0] if ch else 1


# -- factorization-level helpers for counting oracles (still independent of
#    the package: they use trial_division above, not the sieve machinery) --

def crt_orders(n: int) -> list[int]:
    orders = []
    for p, e in trial_division(n):
        if p == 2:
            if e == 1:
                orders.append(1)
            elif e == 2:
                orders.append(2)
            else:
                orders.extend([2, 2 ** (e - 2)])
        else:
            orders.append((p - 1) * p ** (e - 1))
    return orders


def lambda1_via_factorization(n: int) -> int:
    """gcd of the nontrivial CRT cyclic orders; 1 for n <= 2.

    Cross-checked against lambda1_oracle (element orders) in the tests, then
    used to push counting oracles up to x ~ 10^4 where element enumeration
    is too slow.
    """
    if n <= 2:
        return 1
    g = 0
    for m in crt_orders(n):
        if m > 1:
            g = gcd(g, m)
    return g if g else 1


def all_prime_factors_in(n: int, q: int, members: set[int]) -> bool:
    if n == 1:
        return True
    return all(p % q in members for p, _ in trial_division(n))


def count_oracle(x: int, pred) -> int:
    return sum(1 for n in range(1, x + 1) if pred(n))


def least_primary_ne2_oracle(n: int) -> bool:
    return group_structure(n)["least_primary"] != 2


# -- Stieltjes constants via Euler-Maclaurin ---------------------------------

def _derivative_coeffs(n: int, j: int) -> list[Fraction]:
    """Coefficients c_i of f^(j)(t) = (sum_i c_i ln^i t) / t^(j+1) for
    f(t) = ln^n(t)/t, via c_{j+1,i} = (i+1) c_{j,i+1} - (j+1) c_{j,i}."""
    c = [Fraction(0)] * (n + 1)
    c[n] = Fraction(1)
    for jj in range(j):
        nxt = [Fraction(0)] * (n + 1)
        for i in range(n + 1):
            if i + 1 <= n:
                nxt[i] += (i + 1) * c[i + 1]
            nxt[i] -= (jj + 1) * c[i]
        c = nxt
    return c


def stieltjes_oracle(n: int, m: int = 120, J: int = 30, dps: int = 80):
    """gamma_n by Euler-Maclaurin:

    gamma_n = sum_{k<=m} ln^n(k)/k - ln^{n+1}(m)/(n+1) - f(m)/2
              - sum_{j<=J} B_{2j}/(2j)! f^(2j-1)(m) + R_J
    """
    import mpmath

    with mpmath.workdps(dps):
        logm = mpmath.log(m)
        total = mpmath.fsum(mpmath.log(k) ** n / k for k in range(1, m + 1))
        total -= logm ** (n + 1) / (n + 1)
        total -= logm**n / m / 2
        for j in range(1, J + 1):
            c = _derivative_coeffs(n, 2 * j - 1)
            deriv = mpmath.fsum(
                mpmath.mpf(ci.numerator) / ci.denominator * logm**i
                for i, ci in enumerate(c) if ci
            ) / m ** (2 * j)
            total -= mpmath.bernoulli(2 * j) / mpmath.factorial(2 * j) * deriv
        return +total
