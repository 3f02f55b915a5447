"""Sieve-backed counting of lambda_1 statistics up to large x.

One segmented pass factors every n in [1, x] by dividing out base primes
(each division event is a prime-power p^e || n) and feeds the events to all
requested statistics at once:

  * lambda_1(n) accumulates as a gcd-walk over the CRT cyclic orders, one
    per event, so no per-n factor list is ever materialized;
  * "all primes of n land in the class set" predicates drop out of a mask
    lookup per event;
  * the q | lambda_1 predicate checks its per-prime divisibility rules
    directly on the events.

Segments are independent, so threads share nothing but the base primes and
results merge by addition in any order; counts are exact integers and runs
are deterministic for a fixed request.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
from numba import njit

from .arith import factorize, primes_upto
from .constants import ResidueClassSet
from .errors import ConfigurationError, ConsistencyError, DomainError

__all__ = [
    "CountRequest",
    "CountSeries",
    "Statistic",
    "count_D",
    "count_E",
    "count_J",
    "count_NB",
    "count_T",
    "count_least_primary_ne2",
    "default_checkpoints",
    "lambda1_segment",
    "run",
]

DEFAULT_SEGMENT_LEN = 1 << 20
MIN_SEGMENT_LEN = 1 << 10
MAX_SEGMENT_LEN = 1 << 26


@dataclass(frozen=True)
class Statistic:
    """Selector for one counted quantity.

    kind: T (lambda_1 != 2), E (lambda_1 == q), D (q | lambda_1),
    J (all primes of n are 1 mod q), NB (all primes of n in the class set),
    LP (least primary factor != 2). D carries a mode: "direct" reads the
    sieved lambda_1, "predicate" applies the factorization rules. odd_only
    restricts any statistic to odd n.
    """

    kind: str
    q: int | None = None
    classes: frozenset[int] | None = None
    mode: str = "direct"
    odd_only: bool = False

    def label(self) -> str:
        suffix = "_odd" if self.odd_only else ""
        if self.kind == "T":
            return "T" + suffix
        if self.kind == "LP":
            return "LP" + suffix
        if self.kind == "NB":
            classes = ",".join(str(b) for b in sorted(self.classes))
            return f"NB[{self.q};{classes}]" + suffix
        base = f"{self.kind}{self.q}"
        if self.kind == "D" and self.mode == "predicate":
            base += "p"
        return base + suffix


@dataclass(frozen=True)
class CountRequest:
    """A counting campaign: range, checkpoints, statistics, tuning."""

    x_max: int
    checkpoints: tuple[int, ...] = ()
    statistics: tuple[Statistic, ...] = ()
    segment_len: int = DEFAULT_SEGMENT_LEN
    threads: int = 1

    def __post_init__(self):
        x = int(round(self.x_max))
        if x < 1:
            raise DomainError(f"x_max must be >= 1, got {self.x_max}")
        object.__setattr__(self, "x_max", x)
        cps = tuple(int(round(c)) for c in self.checkpoints)
        if not cps:
            cps = default_checkpoints(x)
        if any(c < 1 for c in cps):
            raise DomainError(f"checkpoints must be >= 1: {cps}")
        if list(cps) != sorted(set(cps)):
            raise DomainError(f"checkpoints must be strictly ascending: {cps}")
        if cps[-1] != x:
            raise DomainError(
                f"last checkpoint {cps[-1]} must equal x_max {x}"
            )
        object.__setattr__(self, "checkpoints", cps)
        if not MIN_SEGMENT_LEN <= self.segment_len <= MAX_SEGMENT_LEN:
            raise ConfigurationError(
                f"segment_len {self.segment_len} outside "
                f"[{MIN_SEGMENT_LEN}, {MAX_SEGMENT_LEN}]"
            )
        if self.threads < 1:
            raise ConfigurationError(f"threads must be >= 1, got {self.threads}")


@dataclass(frozen=True)
class CountSeries:
    """Counts of one statistic at each checkpoint."""

    statistic: Statistic
    checkpoints: tuple[int, ...]
    counts: tuple[int, ...]
    warning: str | None = None


def default_checkpoints(x_max: int) -> tuple[int, ...]:
    """Powers of ten from 10^4 up to x_max, with x_max appended."""
    cps = [10**k for k in range(4, 9) if 10**k < x_max]
    cps.append(x_max)
    return tuple(cps)


@njit(nogil=True, cache=True)
def _gcd64(a, b):  # pragma: no cover - jit body
    while b:
        a, b = b, a % b
    return a


@njit(nogil=True, cache=True)
def _event(i, p, e, want_lam, class_q, class_mask, dpred_q, dpred_rule,
           want_lp, lam, class_ok, dpred_ok, lp_ok):  # pragma: no cover
    if want_lam:
        if p == 2:
            if e >= 2:
                lam[i] = _gcd64(lam[i], 2)
        else:
            v = p - 1
            for _ in range(e - 1):
                v *= p
            lam[i] = _gcd64(lam[i], v)
    for j in range(class_q.size):
        if class_ok[j, i] and class_mask[j, p % class_q[j]] == 0:
            class_ok[j, i] = 0
    for j in range(dpred_q.size):
        if dpred_ok[j, i]:
            if p == 2:
                if e >= 2:
                    dpred_ok[j, i] = 0
            elif p < dpred_rule.shape[1] and dpred_rule[j, p] != 0:
                r = dpred_rule[j, p]
                if r < 0 or e < r:
                    dpred_ok[j, i] = 0
            elif p % dpred_q[j] != 1:
                dpred_ok[j, i] = 0
    if want_lp:
        if lp_ok[i]:
            if p == 2:
                if e >= 2:
                    lp_ok[i] = 0
            elif p % 4 != 1:
                lp_ok[i] = 0


@njit(nogil=True, cache=True)
def _profile_segment(lo, size, base_primes, want_lam, class_q, class_mask,
                     dpred_q, dpred_rule, want_lp, lam, class_ok, dpred_ok,
                     lp_ok):  # pragma: no cover - jit body
    hi = lo + size
    rem = np.empty(size, np.int64)
    for i in range(size):
        rem[i] = lo + i
        lam[i] = 0
        lp_ok[i] = 1
    for j in range(class_q.size):
        for i in range(size):
            class_ok[j, i] = 1
    for j in range(dpred_q.size):
        for i in range(size):
            dpred_ok[j, i] = 1
    for bi in range(base_primes.size):
        p = base_primes[bi]
        if p * p >= hi:
            break
        start = ((lo + p - 1) // p) * p
        for mult in range(start, hi, p):
            i = mult - lo
            e = 0
            r = rem[i]
            while r % p == 0:
                r //= p
                e += 1
            rem[i] = r
            _event(i, p, e, want_lam, class_q, class_mask, dpred_q,
                   dpred_rule, want_lp, lam, class_ok, dpred_ok, lp_ok)
    for i in range(size):
        if rem[i] > 1:
            _event(i, rem[i], 1, want_lam, class_q, class_mask, dpred_q,
                   dpred_rule, want_lp, lam, class_ok, dpred_ok, lp_ok)
    for i in range(size):
        n = lo + i
        if lam[i] == 0:
            lam[i] = 1
        if n <= 2:
            for j in range(dpred_q.size):
                dpred_ok[j, i] = 0  # lambda_1 = 1 for n = 1, 2
            lp_ok[i] = 1  # least primary factor is 1, hence != 2


def _dpred_rule_row(q: int, width: int) -> np.ndarray:
    """Per-prime rules for q | lambda_1: for odd p | q the entry is the
    minimum exponent of p in n (v_p(q) + 1) when q / p^v_p(q) divides p - 1,
    -1 when p may not divide n at all, and 0 for primes without a special
    rule (those must be 1 mod q)."""
    row = np.zeros(width, dtype=np.int64)
    for p, v in factorize(q).factors:
        if p == 2:
            continue
        row[p] = v + 1 if (p - 1) % (q // p**v) == 0 else -1
    return row


@dataclass
class _JobTable:
    want_lam: bool
    class_jobs: list
    dpred_qs: list
    want_lp: bool
    extract: dict = field(default_factory=dict)


def _compile_jobs(stats: tuple[Statistic, ...]) -> _JobTable:
    table = _JobTable(False, [], [], False)
    for s in stats:
        if s.kind in ("T",) or (s.kind == "E") or (
            s.kind == "D" and s.mode == "direct"
        ):
            table.want_lam = True
            table.extract[s] = ("lam", 0)
        elif s.kind == "D" and s.mode == "predicate":
            key = s.q
            if key not in table.dpred_qs:
                table.dpred_qs.append(key)
            table.extract[s] = ("dpred", table.dpred_qs.index(key))
        elif s.kind == "J":
            key = (s.q, frozenset({1 % s.q}))
            if key not in table.class_jobs:
                table.class_jobs.append(key)
            table.extract[s] = ("class", table.class_jobs.index(key))
        elif s.kind == "NB":
            key = (s.q, s.classes)
            if key not in table.class_jobs:
                table.class_jobs.append(key)
            table.extract[s] = ("class", table.class_jobs.index(key))
        elif s.kind == "LP":
            table.want_lp = True
            table.extract[s] = ("lp", 0)
        else:
            raise DomainError(f"unknown statistic kind {s.kind!r}")
    return table


def _matches(s: Statistic, lam, class_ok, dpred_ok, lp_ok, table, lo):
    source, idx = table.extract[s]
    if source == "lam":
        if s.kind == "T":
            m = lam != 2
        elif s.kind == "E":
            m = lam == s.q
        else:
            m = lam % s.q == 0
    elif source == "class":
        m = class_ok[idx].astype(bool)
    elif source == "dpred":
        m = dpred_ok[idx].astype(bool)
    else:
        m = lp_ok.astype(bool)
    if s.odd_only:
        m = m.copy()
        m[lo % 2 :: 2] = False  # positions with lo + i even
    return m


def run(request: CountRequest) -> dict[Statistic, CountSeries]:
    """Execute the campaign; returns one exact series per statistic."""
    stats = request.statistics
    if not stats:
        raise DomainError("request carries no statistics")
    for s in stats:
        if s.kind in ("E", "D") and (s.q is None or s.q < 2):
            raise DomainError(f"statistic {s.kind} needs q >= 2")
        if s.kind == "D" and s.mode == "predicate" and (s.q < 4 or s.q % 2):
            raise DomainError("predicate mode needs even q >= 4")
        if s.kind == "D" and s.mode not in ("direct", "predicate"):
            raise DomainError(f"unknown D mode {s.mode!r}")
        if s.kind in ("J", "NB") and (s.q is None or s.q < 3):
            raise DomainError(f"statistic {s.kind} needs q >= 3")
        if s.kind == "NB":
            ResidueClassSet(s.q, s.classes)  # validates membership

    table = _compile_jobs(stats)
    x = request.x_max
    cps = request.checkpoints
    base = primes_upto(math.isqrt(x))
    n_class = len(table.class_jobs)
    qmax_c = max((q for q, _ in table.class_jobs), default=1)
    class_q = np.array([q for q, _ in table.class_jobs], dtype=np.int64)
    class_mask = np.zeros((n_class, qmax_c), dtype=np.uint8)
    for j, (q, members) in enumerate(table.class_jobs):
        for b in members:
            class_mask[j, b % q] = 1
    n_dpred = len(table.dpred_qs)
    qmax_d = max(table.dpred_qs, default=1)
    dpred_q = np.array(table.dpred_qs, dtype=np.int64)
    dpred_rule = np.zeros((n_dpred, qmax_d), dtype=np.int64)
    for j, q in enumerate(table.dpred_qs):
        dpred_rule[j] = _dpred_rule_row(q, qmax_d)

    seg = request.segment_len
    windows = [(lo, min(seg, x + 1 - lo)) for lo in range(1, x + 1, seg)]

    def worker(window):
        lo, size = window
        lam = np.empty(size, dtype=np.int64)
        class_ok = np.empty((n_class, size), dtype=np.uint8)
        dpred_ok = np.empty((n_dpred, size), dtype=np.uint8)
        lp_ok = np.empty(size, dtype=np.uint8)
        _profile_segment(lo, size, base, table.want_lam, class_q, class_mask,
                         dpred_q, dpred_rule, table.want_lp, lam, class_ok,
                         dpred_ok, lp_ok)
        out = np.zeros((len(stats), len(cps)), dtype=np.int64)
        hi = lo + size
        for si, s in enumerate(stats):
            m = _matches(s, lam, class_ok, dpred_ok, lp_ok, table, lo)
            full = None
            for ci, cp in enumerate(cps):
                if cp < lo:
                    continue
                if cp >= hi - 1:
                    if full is None:
                        full = int(m.sum())
                    out[si, ci] = full
                else:
                    out[si, ci] = int(m[: cp - lo + 1].sum())
        return out

    totals = np.zeros((len(stats), len(cps)), dtype=np.int64)
    if request.threads > 1 and len(windows) > 1:
        with ThreadPoolExecutor(max_workers=request.threads) as pool:
            for part in pool.map(worker, windows):
                totals += part
    else:
        for w in windows:
            totals += worker(w)

    return {
        s: CountSeries(s, cps, tuple(int(v) for v in totals[si]))
        for si, s in enumerate(stats)
    }


def lambda1_segment(lo: int, hi: int) -> np.ndarray:
    """lambda_1(n) for n in [lo, hi) as int64; lo >= 1 required."""
    if not 1 <= lo < hi:
        raise DomainError(f"need 1 <= lo < hi, got [{lo}, {hi})")
    size = hi - lo
    if size > MAX_SEGMENT_LEN:
        raise ConfigurationError(
            f"window of {size} exceeds {MAX_SEGMENT_LEN}; sieve in pieces"
        )
    base = primes_upto(math.isqrt(hi - 1))
    lam = np.empty(size, dtype=np.int64)
    e0 = np.empty((0, size), dtype=np.uint8)
    _profile_segment(lo, size, base, True, np.empty(0, np.int64),
                     np.empty((0, 1), np.uint8), np.empty(0, np.int64),
                     np.empty((0, 1), np.int64), False, lam, e0,
                     e0.copy(), np.empty(size, np.uint8))
    return lam


def _single(request: CountRequest, stat: Statistic) -> CountSeries:
    res = run(replace(request, statistics=(stat,)))
    return res[stat]


def count_T(request: CountRequest) -> CountSeries:
    """#{n <= x : lambda_1(n) != 2}; n = 1, 2 count (lambda_1 = 1 there)."""
    return _single(request, Statistic("T"))


def count_E(request: CountRequest, q: int) -> CountSeries:
    """#{n <= x : lambda_1(n) = q}.

    Even q >= 4 is the interesting case; q = 2 is admitted for identity
    checks against T. Odd q >= 3 never occurs as a lambda_1, so the series
    is returned as zeros with a warning instead of raising.
    """
    if q < 2:
        raise DomainError(f"count_E needs q >= 2, got {q}")
    if q % 2 and q >= 3:
        req = CountRequest(request.x_max, request.checkpoints, (),
                           request.segment_len, request.threads)
        return CountSeries(
            Statistic("E", q=q), req.checkpoints,
            (0,) * len(req.checkpoints),
            warning=f"lambda_1 is even for every n >= 3; E_{q} is identically 0",
        )
    return _single(request, Statistic("E", q=q))


def count_D(request: CountRequest, q: int, mode: str = "direct"):
    """#{n <= x : q | lambda_1(n)}.

    mode "direct" reads the sieved lambda_1; "predicate" applies the
    factorization rules (even q >= 4 only); "both" runs the two routes,
    raises ConsistencyError if they ever disagree, and returns the pair
    (direct, predicate). Odd q gives the zero series with a warning.
    """
    if q < 2:
        raise DomainError(f"count_D needs q >= 2, got {q}")
    if q % 2:
        req = CountRequest(request.x_max, request.checkpoints, (),
                           request.segment_len, request.threads)
        return CountSeries(
            Statistic("D", q=q), req.checkpoints,
            (0,) * len(req.checkpoints),
            warning=f"lambda_1 is even for every n >= 3; D_{q} is identically 0",
        )
    if mode == "direct":
        return _single(request, Statistic("D", q=q))
    if mode == "predicate":
        return _single(request, Statistic("D", q=q, mode="predicate"))
    if mode == "both":
        direct = Statistic("D", q=q)
        pred = Statistic("D", q=q, mode="predicate")
        res = run(replace(request, statistics=(direct, pred)))
        if res[direct].counts != res[pred].counts:
            raise ConsistencyError(
                f"D_{q} routes disagree: direct {res[direct].counts} vs "
                f"predicate {res[pred].counts}"
            )
        return res[direct], res[pred]
    raise DomainError(f"unknown mode {mode!r}")


def count_J(request: CountRequest, q: int) -> CountSeries:
    """#{n <= x : every prime of n is 1 mod q}; n = 1 counts vacuously."""
    if q < 3:
        raise DomainError(f"count_J needs q >= 3, got {q}")
    return _single(request, Statistic("J", q=q))


def count_NB(request: CountRequest, q: int, classes) -> CountSeries:
    """#{n <= x : every prime of n lies in the classes mod q}; n = 1 counts."""
    B = ResidueClassSet(q, frozenset(classes))
    return _single(request, Statistic("NB", q=q, classes=B.members))


def count_least_primary_ne2(request: CountRequest) -> CountSeries:
    """#{n <= x : the least primary factor of (Z/nZ)^* is not 2}."""
    return _single(request, Statistic("LP"))
