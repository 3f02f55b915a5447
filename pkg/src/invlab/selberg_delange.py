"""Series coefficients behind the main terms.

Counts of integers whose generating Dirichlet series behaves like a power
zeta(s)^z near s = 1 have asymptotics

    sum_{n <= x} a_n ~ x (log x)^(z-1) * sum_{k>=0} lambda_k(z) / (log x)^k,

where the lambda_k come from the Taylor expansion at s = 1 of

    Z(s; z) = ((s - 1) zeta(s))^z * G(s) / s

against reciprocal Gamma values. This module provides the truncated power
series arithmetic, the expansion of (s - 1) zeta(s) in terms of Stieltjes
constants, the coefficients gamma_j(z)/j! of ((s-1)zeta(s))^z / s, and the
resulting lambda_k.
"""

from __future__ import annotations

from dataclasses import dataclass

from scipy.special import rgamma

from .errors import ConfigurationError, DomainError

__all__ = [
    "STIELTJES",
    "StieltjesConstants",
    "TruncatedPowerSeries",
    "Z_coeffs",
    "lambda_coeffs",
    "recip_gamma",
    "sd_main_term",
    "series_pow",
    "zeta_shifted_series",
]


@dataclass(frozen=True)
class StieltjesConstants:
    """gamma_0 .. gamma_n as decimal strings, 25 significant digits."""

    digits: tuple[str, ...]

    @property
    def depth(self) -> int:
        return len(self.digits) - 1

    def as_floats(self) -> tuple[float, ...]:
        return tuple(float(s) for s in self.digits)


STIELTJES = StieltjesConstants((
    "0.5772156649015328606065121",
    "-0.07281584548367672486058638",
    "-0.009690363192872318484530386",
    "0.002053834420303345866160047",
    "0.002325370065467300057468170",
    "0.0007933238173010627017533349",
    "-0.0002387693454301996098724218",
    "-0.0005272895670577510460740975",
    "-0.0003521233538030395096020522",
    "-0.00003439477441808804817791462",
    "0.0002053328149090647946837223",
))


@dataclass(frozen=True)
class TruncatedPowerSeries:
    """Power series in (s - 1), closed at a fixed order.

    Binary operations truncate to the shorter operand. Coefficients are
    complex; construction accepts any mix of ints, floats, and complexes.
    """

    coeffs: tuple[complex, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise DomainError("series needs at least the constant coefficient")
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in self.coeffs))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def truncated(self, n: int) -> "TruncatedPowerSeries":
        if n < 0:
            raise DomainError(f"cannot truncate to order {n}")
        if n >= self.order:
            return self
        return TruncatedPowerSeries(self.coeffs[: n + 1])

    def __add__(self, other: "TruncatedPowerSeries") -> "TruncatedPowerSeries":
        n = min(self.order, other.order)
        return TruncatedPowerSeries(
            tuple(self.coeffs[k] + other.coeffs[k] for k in range(n + 1))
        )

    def __mul__(self, other: "TruncatedPowerSeries") -> "TruncatedPowerSeries":
        n = min(self.order, other.order)
        out = []
        for k in range(n + 1):
            out.append(sum(self.coeffs[j] * other.coeffs[k - j] for j in range(k + 1)))
        return TruncatedPowerSeries(tuple(out))

    def reciprocal(self) -> "TruncatedPowerSeries":
        f = self.coeffs
        if f[0] == 0:
            raise DomainError("cannot invert a series with zero constant term")
        r = [1 / f[0]]
        for k in range(1, self.order + 1):
            r.append(-sum(f[j] * r[k - j] for j in range(1, k + 1)) / f[0])
        return TruncatedPowerSeries(tuple(r))

    def log(self) -> "TruncatedPowerSeries":
        import cmath

        f = self.coeffs
        if f[0] == 0:
            raise DomainError("log needs a unit series (nonzero constant term)")
        out = [cmath.log(f[0])]
        for k in range(1, self.order + 1):
            acc = f[k]
            for j in range(1, k):
                acc -= (j / k) * out[j] * f[k - j]
            out.append(acc / f[0])
        return TruncatedPowerSeries(tuple(out))

    def exp(self) -> "TruncatedPowerSeries":
        import cmath

        g = self.coeffs
        out = [cmath.exp(g[0])]
        for k in range(1, self.order + 1):
            out.append(sum(j * g[j] * out[k - j] for j in range(1, k + 1)) / k)
        return TruncatedPowerSeries(tuple(out))


def zeta_shifted_series(N: int) -> TruncatedPowerSeries:
    """Expansion of (s - 1) zeta(s) around s = 1, through order N:

        c_0 = 1,  c_{n+1} = (-1)^n gamma_n / n!.
    """
    if N < 0:
        raise DomainError(f"order must be >= 0, got {N}")
    gammas = STIELTJES.as_floats()
    if N > len(gammas):
        raise ConfigurationError(
            f"order {N} exceeds the stored Stieltjes depth {STIELTJES.depth}"
        )
    coeffs = [1.0]
    fact = 1.0
    for n in range(N):
        if n >= 2:
            fact *= n
        coeffs.append((-1) ** n * gammas[n] / fact)
    return TruncatedPowerSeries(tuple(coeffs))


def series_pow(base: TruncatedPowerSeries, z: complex, N: int | None = None) -> TruncatedPowerSeries:
    """base^z as exp(z log base), requiring constant term exactly 1 so the
    branch is unambiguous and the result again has constant term 1."""
    if base.coeffs[0] != 1:
        raise DomainError(
            f"series_pow needs constant term 1, got {base.coeffs[0]}"
        )
    if N is not None:
        base = base.truncated(N)
    lg = base.log()
    scaled = TruncatedPowerSeries(tuple(complex(z) * c for c in lg.coeffs))
    return scaled.exp()


def _inv_s_series(N: int) -> TruncatedPowerSeries:
    # 1/s = 1/(1 + (s-1)) = sum (-1)^k (s-1)^k
    return TruncatedPowerSeries(tuple((-1.0) ** k for k in range(N + 1)))


def Z_coeffs(z: complex, N: int) -> list[complex]:
    """Taylor coefficients gamma_j(z)/j!, j = 0..N, of ((s-1)zeta(s))^z / s.

    Real z gives real coefficients; the rounding dust from the complex
    exp/log round trip is dropped in that case.
    """
    zser = series_pow(zeta_shifted_series(N), z)
    coeffs = list((zser * _inv_s_series(N)).coeffs)
    if complex(z).imag == 0:
        return [c.real + 0.0 for c in coeffs]
    return coeffs


def recip_gamma(w: complex) -> complex:
    """1/Gamma(w), entire; exactly zero at 0, -1, -2, ..."""
    w = complex(w)
    if w.imag == 0 and w.real <= 0 and w.real == int(w.real):
        return 0j
    return complex(rgamma(w))


def lambda_coeffs(z: complex, G_taylor: list[complex], N: int) -> list[complex]:
    """lambda_k(z) = sum_{h+j=k} (G^(h)(1)/h!) gamma_j(z)/j! / Gamma(z - k).

    G_taylor holds the Taylor coefficients of the multiplier G at s = 1 and
    must reach order N. Reciprocal Gamma makes the terms with z - k a
    nonpositive integer vanish identically.
    """
    if len(G_taylor) < N + 1:
        raise DomainError(
            f"G_taylor has {len(G_taylor)} coefficients, need {N + 1}"
        )
    zc = Z_coeffs(z, N)
    real_case = complex(z).imag == 0 and all(
        complex(g).imag == 0 for g in G_taylor
    )
    out = []
    for k in range(N + 1):
        acc = sum(complex(G_taylor[h]) * complex(zc[k - h]) for h in range(k + 1))
        v = recip_gamma(complex(z) - k) * acc
        out.append(v.real + 0.0 if real_case else v)
    return out


def sd_main_term(x: float, z: complex, lambdas: list[complex], N: int | None = None):
    """x (log x)^(z-1) sum_{k<=N} lambda_k / (log x)^k, for x >= 3.

    Returns a float when z is real (the imaginary part is dropped; for real
    data it is zero to rounding), otherwise a complex number.
    """
    if x < 3:
        raise DomainError(f"main term evaluation needs x >= 3, got {x}")
    z = complex(z)
    if N is None:
        N = len(lambdas) - 1
    if N >= len(lambdas):
        raise DomainError(f"N={N} exceeds available lambda coefficients")
    import cmath
    import math

    lx = math.log(x)
    series = sum(complex(lambdas[k]) / lx**k for k in range(N + 1))
    value = x * cmath.exp((z - 1) * math.log(lx)) * series
    if z.imag == 0:
        return value.real
    return value
