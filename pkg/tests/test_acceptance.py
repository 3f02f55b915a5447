"""Acceptance gate.

Each test covers one numbered criterion and prints a single [PASS]/[FAIL]
line (run pytest with -s to see them); the assertion carries the same text.
Criterion 8 is a property check on asymptotic ratios at desk scale; see the
engineering notes for the measured behavior of the E_4 leg.
"""

import json
import math
import random
import resource
import time
from pathlib import Path

import numpy as np
import pytest

from invlab import cli
from invlab.arith import Factorization, lpf_segment, primes_upto, totient
from invlab.constants import G_B1, G_q, ResidueClassSet, main_term_constant
from invlab.counting import CountRequest, Statistic, count_D, lambda1_segment, run
from invlab.groups import (
    CyclicDecomposition,
    divides_lambda1_fast,
    invariant_factors,
    lambda1,
    q_divides_lambda1_structural,
    unit_group_cyclic_orders,
)
from invlab.selberg_delange import lambda_coeffs

from oracles import all_prime_factors_in, count_oracle, group_structure

DATA = Path(__file__).parent / "data"


def _report(num, title, ok, detail=""):
    tag = "PASS" if ok else "FAIL"
    line = f"[{tag}] criterion {num:2d}: {title}"
    if detail:
        line += f" -- {detail}"
    print(line)
    assert ok, line


def _constants_cli(q, tmp_path):
    out = tmp_path / f"c{q}.csv"
    code = cli.main([
        "constants", "--q", str(q), "--P", "1e7", "--closed-form",
        "--no-header", "--out", str(out),
    ])
    rows = {}
    for line in out.read_text().splitlines():
        if line.startswith("#") or line.startswith("name,"):
            continue
        name, value, bound, P = line.split(",")
        rows[name] = (float(value), float(bound), int(P))
    return code, rows


def _closed_form_criterion(num, q, reference, tmp_path):
    t0 = time.perf_counter()
    code, rows = _constants_cli(q, tmp_path)
    dt = time.perf_counter() - t0
    hq, hq_bound, _ = rows[f"H_{q}"]
    cf, cf_bound, _ = rows[f"H_{q}_closed"]
    ok = (
        code == 0
        and abs(hq - reference) < 2e-6
        and abs(cf - reference) < 2e-6
        and abs(hq - cf) <= hq_bound + cf_bound
        and dt < 60.0
    )
    _report(
        num,
        f"H_{q} both routes at P=1e7",
        ok,
        f"character {hq:.9f}, closed {cf:.9f}, ref {reference}, {dt:.1f}s",
    )


def test_criterion_01_h4(tmp_path):
    _closed_form_criterion(1, 4, 0.490694, tmp_path)


def test_criterion_02_h6(tmp_path):
    _closed_form_criterion(2, 6, 0.527129, tmp_path)


def test_criterion_03_partition_identity():
    t0 = time.perf_counter()
    rng = random.Random(20260814)
    P = 10**6
    worst = 0.0
    for q in (3, 4, 5, 6, 8, 12):
        classes = [a for a in range(1, q) if math.gcd(a, q) == 1]
        for _ in range(5):
            k = rng.randint(1, len(classes) - 1)
            B = ResidueClassSet(q, frozenset(rng.sample(classes, k)))
            a = G_B1(B, P)
            b = G_B1(B.complement, P)
            err = abs(a.value * b.value - totient(q) / q)
            slack = a.error_bound * b.value + b.error_bound * a.value + 1e-8
            worst = max(worst, err - slack)
    dt = time.perf_counter() - t0
    ok = worst <= 0 and dt < 300.0
    _report(
        3,
        "G_B(1) * G_B'(1) = phi(q)/q over random partitions",
        ok,
        f"worst excess {worst:.2e}, {dt:.1f}s",
    )


def test_criterion_04_structural_equivalence():
    t0 = time.perf_counter()
    x = 10**6
    qs = list(range(4, 41, 2))
    lpf = lpf_segment(2, x + 1, primes_upto(1001)).lpf
    mismatches = 0
    first_bad = None
    for n in range(1, x + 1):
        if n == 1:
            factors = ()
        else:
            m = n
            fs = []
            while m > 1:
                p = int(lpf[m - 2])
                e = 0
                while m % p == 0:
                    m //= p
                    e += 1
                fs.append((p, e))
            factors = tuple(fs)
        f = Factorization(n, factors)
        chain = invariant_factors(unit_group_cyclic_orders(f)).chain
        lam1 = chain[0] if chain else 1
        for q in qs:
            if divides_lambda1_fast(f, q) != (lam1 % q == 0):
                mismatches += 1
                first_bad = first_bad or (n, q)
    dt = time.perf_counter() - t0
    ok = mismatches == 0 and dt < 300.0
    _report(
        4,
        "divides_lambda1_fast == chain route, n <= 1e6, even q <= 40",
        ok,
        f"{mismatches} mismatches (first: {first_bad}), {dt:.1f}s",
    )


def test_criterion_05_shared_factor_lemma():
    rng = random.Random(1729)
    bad = 0
    for _ in range(10**4):
        share = rng.randint(2, 30)
        orders = tuple(
            share * rng.randint(1, 60) for _ in range(rng.randint(1, 6))
        )
        q = rng.randint(2, 30)
        got = q_divides_lambda1_structural(CyclicDecomposition(orders), q)
        if got != all(m % q == 0 for m in orders):
            bad += 1
    pair_a = invariant_factors(CyclicDecomposition((30, 30))).chain
    pair_b = invariant_factors(CyclicDecomposition((6, 10, 15))).chain
    pair_ok = pair_a == pair_b == (30, 30) and pair_a[0] == 30
    ok = bad == 0 and pair_ok
    _report(
        5,
        "q | lambda_1 iff q divides every entry; {30,30} vs {6,10,15}",
        ok,
        f"{bad} property violations, chains {pair_a} and {pair_b}",
    )


def test_criterion_06_exact_identities():
    x = 10**6
    req = CountRequest(
        x,
        checkpoints=(x,),
        statistics=(
            Statistic("T"),
            Statistic("E", q=2),
            Statistic("D", q=4),
            Statistic("D", q=4, mode="predicate"),
            Statistic("D", q=4, odd_only=True),
        ),
    )
    res = {s.label(): series.counts[0] for s, series in run(req).items()}
    half = run(
        CountRequest(
            x // 2, checkpoints=(x // 2,),
            statistics=(Statistic("D", q=4, odd_only=True),),
        )
    )
    d4_odd_half = next(iter(half.values())).counts[0]

    lam = lambda1_segment(1, x + 1)
    hist = np.bincount(lam)
    d4_from_histogram = int(hist[4::4].sum())

    legs = {
        "T + E_2 = floor(x)": res["T"] + res["E2"] == x,
        "D_4 = sum of E_4m": res["D4p"] == d4_from_histogram,
        "D_4(x) = D_4^odd(x) + D_4^odd(x/2)":
            res["D4"] == res["D4_odd"] + d4_odd_half,
        "predicate = direct": res["D4"] == res["D4p"],
    }
    ok = all(legs.values())
    _report(
        6,
        "exact integer identities at x = 1e6",
        ok,
        "; ".join(f"{k}: {'ok' if v else 'BROKEN'}" for k, v in legs.items()),
    )


def test_criterion_07_oracle_spot_values():
    j4 = count_oracle(100, lambda n: all_prime_factors_in(n, 4, {1}))
    t10 = count_oracle(
        10, lambda n: group_structure(n)["chain"][:1] != [2]
    )
    lam_vals = {n: group_structure(n)["chain"] for n in (5, 63, 8)}
    oracle_ok = (
        j4 == 15
        and t10 == 6
        and lam_vals[5][0] == 4
        and lam_vals[63][0] == 6
        and lam_vals[8][0] == 2
    )
    build_ok = lambda1(5) == 4 and lambda1(63) == 6 and lambda1(8) == 2
    engine = run(
        CountRequest(
            100, checkpoints=(10, 100),
            statistics=(Statistic("T"), Statistic("J", q=4)),
        )
    )
    engine_ok = (
        engine[Statistic("T")].counts[0] == 6
        and engine[Statistic("J", q=4)].counts[1] == 15
    )
    ok = oracle_ok and build_ok and engine_ok
    _report(
        7,
        "J_4(100)=15, T(10)=6, lambda_1 of 5/63/8 vs element-order oracle",
        ok,
        f"oracle {oracle_ok}, build {build_ok}, engine {engine_ok}",
    )


@pytest.fixture(scope="module")
def campaign():
    x = 10**8
    cps = (10**4, 10**5, 10**6, 10**7, x)
    stats = (
        Statistic("T"),
        Statistic("E", q=4),
        Statistic("E", q=6),
        Statistic("J", q=4),
        Statistic("J", q=6),
    )
    t0 = time.perf_counter()
    res = run(CountRequest(x, checkpoints=cps, statistics=stats))
    dt = time.perf_counter() - t0
    return res, cps, dt


def test_criterion_08_asymptotic_bands(campaign):
    res, cps, sieve_dt = campaign
    t0 = time.perf_counter()
    P = 10**7
    terms = {
        "T": main_term_constant("T", P=P),
        "E4": main_term_constant("E", q=4, P=P),
        "E6": main_term_constant("E", q=6, P=P),
        "J4": main_term_constant("J", q=4, P=P),
        "J6": main_term_constant("J", q=6, P=P),
    }
    dt = sieve_dt + (time.perf_counter() - t0)
    rss_mb = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1024

    details = []
    ok = True
    for stat, series in res.items():
        est, power = terms[stat.label()]
        ratios = {
            x: c / (est.value * x / math.log(x) ** power)
            for x, c in zip(series.checkpoints, series.counts)
        }
        r8, r6 = ratios[10**8], ratios[10**6]
        in_band = 0.5 <= r8 <= 1.5
        improves = abs(r8 - 1) < abs(r6 - 1)
        ok = ok and in_band and improves
        details.append(
            f"{stat.label()}: r(1e8)={r8:.4f}"
            + ("" if in_band else " OUTSIDE [0.5,1.5]")
            + ("" if improves else " NOT IMPROVING")
        )
    budget_ok = dt < 600.0 and rss_mb < 512.0
    ok = ok and budget_ok
    details.append(f"{dt:.1f}s, peak rss {rss_mb:.0f} MB")
    _report(8, "ratio bands at x = 1e8 for T, E4, E6, J4, J6", ok, "; ".join(details))


def test_criterion_09_selberg_delange_coefficients():
    exact = lambda_coeffs(1, [1, 0, 0, 0], 3) == [1.0, 0.0, 0.0, 0.0]
    rng = random.Random(31)
    worst = 0.0
    for _ in range(100):
        z = rng.random() or 0.5
        lam0 = lambda_coeffs(z, [1.0, 0.0], 1)[0]
        worst = max(worst, abs(lam0 - 1 / math.gamma(z)))
    random_ok = worst < 1e-12
    P = 10**6
    gb = G_B1(ResidueClassSet(4, frozenset({1})), P)
    gq = G_q(4, P)
    lam0 = lambda_coeffs(0.5, [gb.value, 0.0], 1)[0]
    slack = gb.error_bound / math.gamma(0.5) + gq.error_bound
    g4_ok = abs(lam0 - gq.value) <= slack
    ok = exact and random_ok and g4_ok
    _report(
        9,
        "lambda_k(1) exact, lambda_0 = g_0/Gamma(z), G_4 reproduced",
        ok,
        f"exact {exact}, worst |err| {worst:.2e}, G_4 leg {g4_ok}",
    )


def test_criterion_10_gq_growth_guard():
    with open(DATA / "gq_baseline.json") as fh:
        baseline = json.load(fh)
    P = baseline["truncation_P"]
    worst_rel = 0.0
    ratios = []
    for q_s, old in baseline["G_q"].items():
        q = int(q_s)
        new = G_q(q, P).value
        worst_rel = max(worst_rel, abs(new - old) / old)
        ratios.append(new * totient(q) / math.log(q))
    bounded = 0.05 < min(ratios) and max(ratios) < 1.0
    ok = worst_rel < 1e-9 and bounded and len(ratios) == 99
    _report(
        10,
        "G_q * phi(q)/log q bounded on even q in [4, 200], golden baseline",
        ok,
        f"max rel drift {worst_rel:.1e}, ratio range "
        f"[{min(ratios):.3f}, {max(ratios):.3f}]",
    )
