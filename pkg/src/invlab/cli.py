"""Command line interface.

Subcommands:

  structure N            invariant factor chain and friends for one n
  count                  sieve counting statistics, CSV or JSON
  constants              the asymptotic constants with error bounds
  compare                counts next to main terms with ratios
  sd                     series coefficients lambda_k(z)

Exit codes: 0 success, 2 bad arguments or configuration, 3 internal
consistency failure (two supposedly equal routes disagreed).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass
from datetime import datetime, timezone

from . import __version__
from .arith import factorize
from .constants import (
    DEFAULT_CUTOFF,
    G_B1,
    G_q,
    H4_closed,
    H6_closed,
    H_q,
    ResidueClassSet,
    main_term_constant,
    totient,
)
from .counting import (
    CountRequest,
    count_D,
    count_E,
    count_J,
    count_NB,
    count_T,
    count_least_primary_ne2,
)
from .errors import (
    ConfigurationError,
    ConsistencyError,
    DomainError,
    PreconditionError,
)
from .groups import (
    carmichael,
    invariant_factors,
    lambda1,
    least_primary_factor,
    unit_group_cyclic_orders,
)
from .selberg_delange import Z_coeffs, lambda_coeffs

STATS = ("T", "E", "D", "J", "NB", "LP")


@dataclass(frozen=True)
class ComparisonRow:
    """One checkpoint of a compare run."""

    x: int
    count: int
    main_term: float

    @property
    def ratio(self) -> float:
        return self.count / self.main_term


def _parse_int(text: str) -> int:
    return int(round(float(text)))


def _parse_checkpoints(text: str, x_max: int) -> tuple[int, ...]:
    """Either a comma list ("1e4,5e4,1e5") or a decade range ("1e4..1e8");
    the range form expands to powers of ten, capped at x_max and always
    closing with x_max itself."""
    if ".." in text:
        lo_s, hi_s = text.split("..", 1)
        lo, hi = _parse_int(lo_s), _parse_int(hi_s)
        if lo < 1 or hi < lo:
            raise DomainError(f"bad checkpoint range {text!r}")
        cps = []
        c = lo
        while c <= min(hi, x_max):
            cps.append(c)
            c *= 10
        if not cps or cps[-1] != x_max:
            cps.append(x_max)
        return tuple(cps)
    cps = sorted({_parse_int(t) for t in text.split(",") if t.strip()})
    if not cps:
        raise DomainError("empty checkpoint list")
    if cps[-1] < x_max:
        cps.append(x_max)
    return tuple(cps)


def _parse_classes(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise DomainError(f"bad class list {text!r}") from exc


def _fmt(v: float) -> str:
    return format(v, ".12g")


def _fmt_complex(v) -> str:
    v = complex(v)
    if v.imag == 0:
        return _fmt(v.real)
    return f"{v.real:.12g}{v.imag:+.12g}j"


class _Sink:
    """stdout or a file, with the optional provenance header line."""

    def __init__(self, out: str | None, no_header: bool, command: str):
        self.out = out
        self.no_header = no_header
        self.command = command
        self.lines: list[str] = []
        if not no_header:
            stamp = datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
            self.lines.append(f"# invlab {__version__} {command} {stamp}")

    def write(self, line: str) -> None:
        self.lines.append(line)

    def flush(self) -> None:
        text = "\n".join(self.lines) + "\n"
        if self.out:
            with open(self.out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)


def _threads(args) -> int:
    if args.threads is not None:
        return args.threads
    env = os.environ.get("INVLAB_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise ConfigurationError(
                f"INVLAB_THREADS={env!r} is not an integer"
            ) from exc
    return 1


def _validate_stat_args(args) -> None:
    stat = args.stat
    if stat in ("E", "D"):
        if args.q is None:
            raise DomainError(f"--stat {stat} requires --q")
        if args.q % 2:
            raise DomainError(
                f"--stat {stat} needs even q (lambda_1 is even for n >= 3), got {args.q}"
            )
        if stat == "D" and args.mode in ("predicate", "both") and args.q < 4:
            raise DomainError("predicate mode needs even q >= 4")
    elif stat == "J":
        if args.q is None or args.q < 3:
            raise DomainError("--stat J requires --q >= 3")
    elif stat == "NB":
        if args.q is None or args.q < 3:
            raise DomainError("--stat NB requires --q >= 3")
        if not args.classes:
            raise DomainError("--stat NB requires --classes")
        ResidueClassSet(args.q, frozenset(_parse_classes(args.classes)))


def _run_stat(args, request: CountRequest):
    stat = args.stat
    if stat == "T":
        return count_T(request)
    if stat == "E":
        return count_E(request, args.q)
    if stat == "D":
        return count_D(request, args.q, mode=args.mode)
    if stat == "J":
        return count_J(request, args.q)
    if stat == "NB":
        return count_NB(request, args.q, _parse_classes(args.classes))
    if stat == "LP":
        return count_least_primary_ne2(request)
    raise DomainError(f"unknown statistic {stat!r}")


def cmd_structure(args) -> int:
    n = _parse_int(args.n)
    f = factorize(n)
    dec = unit_group_cyclic_orders(f)
    chain = invariant_factors(dec).chain
    sink = _Sink(args.out, args.no_header, "structure")
    fact = " * ".join(
        f"{p}^{e}" if e > 1 else str(p) for p, e in f.factors
    ) or "1"
    sink.write(f"n = {n} = {fact}")
    sink.write(
        "cyclic orders: " + (", ".join(str(m) for m in dec.orders) or "(trivial)")
    )
    sink.write(
        "invariant factors: " + (" | ".join(str(d) for d in chain) or "(trivial)")
    )
    sink.write(f"lambda_1 = {lambda1(n)}")
    sink.write(f"carmichael = {carmichael(n)}")
    sink.write(f"least primary factor = {least_primary_factor(n)}")
    sink.flush()
    return 0


def _make_request(args) -> CountRequest:
    x = _parse_int(args.x)
    cps = (
        _parse_checkpoints(args.checkpoints, x)
        if args.checkpoints
        else ()
    )
    kwargs = {}
    if args.segment_size is not None:
        kwargs["segment_len"] = _parse_int(args.segment_size)
    return CountRequest(x, checkpoints=cps, threads=_threads(args), **kwargs)


def cmd_count(args) -> int:
    _validate_stat_args(args)
    request = _make_request(args)
    result = _run_stat(args, request)
    pair = isinstance(result, tuple)
    series = result[0] if pair else result

    if args.format == "json":
        payload = {
            "meta": {
                "command": "count",
                "statistic": series.statistic.label(),
                "x_max": request.x_max,
                "checkpoints": list(series.checkpoints),
                "segment_len": request.segment_len,
                "threads": request.threads,
                "warning": series.warning,
            },
            "rows": [
                {"x": x, "count": c}
                for x, c in zip(series.checkpoints, series.counts)
            ],
        }
        if pair:
            payload["meta"]["statistic"] = series.statistic.label().rstrip("p")
            payload["rows"] = [
                {"x": x, "count_direct": a, "count_predicate": b}
                for x, a, b in zip(
                    series.checkpoints, result[0].counts, result[1].counts
                )
            ]
        text = json.dumps(payload, indent=2) + "\n"
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return 0

    sink = _Sink(args.out, args.no_header, "count")
    if series.warning:
        print(f"warning: {series.warning}", file=sys.stderr)
    if pair:
        sink.write("x,count_direct,count_predicate")
        for x, a, b in zip(series.checkpoints, result[0].counts, result[1].counts):
            sink.write(f"{x},{a},{b}")
    else:
        sink.write("x,count")
        for x, c in zip(series.checkpoints, series.counts):
            sink.write(f"{x},{c}")
    sink.flush()
    return 0


def _constant_for(args):
    B = None
    if args.stat == "NB":
        B = ResidueClassSet(args.q, frozenset(_parse_classes(args.classes)))
    return main_term_constant(args.stat, q=args.q, B=B, P=args.P)


def cmd_compare(args) -> int:
    _validate_stat_args(args)
    if args.stat == "D" and args.mode == "both":
        raise DomainError("compare uses one route; pick --mode direct or predicate")
    request = _make_request(args)
    series = _run_stat(args, request)
    if series.warning:
        raise DomainError(
            f"no main term for an identically zero statistic: {series.warning}"
        )
    est, power = _constant_for(args)
    rows = []
    for x, c in zip(series.checkpoints, series.counts):
        if x < 3:
            raise DomainError(f"main term needs checkpoints >= 3, got {x}")
        m = est.value * x / math.log(x) ** power
        rows.append(ComparisonRow(x, c, m))

    if args.format == "json":
        payload = {
            "meta": {
                "command": "compare",
                "statistic": series.statistic.label(),
                "x_max": request.x_max,
                "constant": est.value,
                "constant_error_bound": est.error_bound,
                "truncation_P": est.truncation_P,
                "log_power": power,
                "segment_len": request.segment_len,
                "threads": request.threads,
            },
            "rows": [
                {"x": r.x, "count": r.count, "main_term": r.main_term,
                 "ratio": r.ratio}
                for r in rows
            ],
        }
        text = json.dumps(payload, indent=2) + "\n"
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    else:
        sink = _Sink(args.out, args.no_header, "compare")
        sink.write("x,count,main_term,ratio")
        for r in rows:
            sink.write(f"{r.x},{r.count},{_fmt(r.main_term)},{_fmt(r.ratio)}")
        sink.write(
            f"# constant {_fmt(est.value)} error_bound {est.error_bound:.3e} "
            f"truncation_P {est.truncation_P} log_power {_fmt(power)}"
        )
        sink.flush()

    if args.plot:
        from .plotting import save_ratio_figure

        save_ratio_figure(
            [r.x for r in rows],
            [r.count for r in rows],
            [r.main_term for r in rows],
            series.statistic.label(),
            args.plot,
        )
    return 0


def cmd_constants(args) -> int:
    sink = _Sink(args.out, args.no_header, "constants")
    P = args.P
    if args.B:
        if args.q is None:
            raise DomainError("--B requires --q")
        B = ResidueClassSet(args.q, frozenset(_parse_classes(args.B)))
        est = G_B1(B, P)
        sink.write("name,value,error_bound,truncation_P")
        sink.write(
            f"G_B1[{args.q};{','.join(str(b) for b in sorted(B.members))}],"
            f"{_fmt(est.value)},{est.error_bound:.3e},{est.truncation_P}"
        )
        # the complement partition must recover phi(q)/q = prod_{p|q} (1 - 1/p)
        target = totient(args.q) / args.q
        try:
            comp = G_B1(B.complement, P)
            got = est.value * comp.value
            slack = est.error_bound * comp.value + comp.error_bound * est.value
        except DomainError:  # B is the full class set; check it directly
            got = est.value
            slack = est.error_bound
        if abs(got - target) > slack + 1e-9:
            raise ConsistencyError(
                f"complement partition check failed: {got} != {target}"
            )
        sink.write(f"# complement partition check passed: product = {_fmt(got)}")
        sink.flush()
        return 0
    if args.q is None:
        raise DomainError("constants needs --q (optionally with --B)")
    q = args.q
    sink.write("name,value,error_bound,truncation_P")
    gq = G_q(q, P)
    hq = H_q(q, P)
    sink.write(f"G_{q},{_fmt(gq.value)},{gq.error_bound:.3e},{gq.truncation_P}")
    sink.write(f"H_{q},{_fmt(hq.value)},{hq.error_bound:.3e},{hq.truncation_P}")
    if args.closed_form:
        if q == 4:
            cf = H4_closed(P)
        elif q == 6:
            cf = H6_closed(P)
        else:
            raise DomainError(f"closed form exists for q = 4 and 6 only, not {q}")
        sink.write(
            f"H_{q}_closed,{_fmt(cf.value)},{cf.error_bound:.3e},{cf.truncation_P}"
        )
        if abs(cf.value - hq.value) > cf.error_bound + hq.error_bound:
            raise ConsistencyError(
                f"closed form and character route disagree for q={q}: "
                f"{cf.value} vs {hq.value}"
            )
        sink.write("# closed-form check passed")
    sink.flush()
    return 0


def cmd_sd(args) -> int:
    if args.N > 10:
        raise ConfigurationError(f"--N is capped at 10, got {args.N}")
    if args.N < 0:
        raise DomainError(f"--N must be >= 0, got {args.N}")
    try:
        z = complex(args.z)
    except ValueError as exc:
        raise DomainError(f"bad --z value {args.z!r}") from exc
    g_taylor = [args.g0] + [0.0] * args.N
    zc = Z_coeffs(z, args.N)
    lams = lambda_coeffs(z, g_taylor, args.N)
    sink = _Sink(args.out, args.no_header, "sd")
    sink.write("k,z_coeff,lambda")
    for k in range(args.N + 1):
        sink.write(f"{k},{_fmt_complex(zc[k])},{_fmt_complex(lams[k])}")
    sink.flush()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="invlab",
        description="Invariant factors of (Z/nZ)^*: structure, counts, constants.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common_output(p):
        p.add_argument("--out", help="write to this file instead of stdout")
        p.add_argument(
            "--no-header",
            action="store_true",
            help="suppress the provenance/timestamp comment line",
        )

    p = sub.add_parser("structure", help="invariant factors of one (Z/nZ)^*")
    p.add_argument("n", help="modulus, n >= 1")
    common_output(p)
    p.set_defaults(func=cmd_structure)

    def common_count(p):
        p.add_argument("--stat", required=True, choices=STATS)
        p.add_argument("--x", required=True, help="count up to this bound")
        p.add_argument("--q", type=int, help="modulus for E/D/J/NB")
        p.add_argument("--classes", help="comma list of residue classes for NB")
        p.add_argument(
            "--mode",
            choices=("direct", "predicate", "both"),
            default="direct",
            help="route for D: sieved lambda_1, factorization rules, or both",
        )
        p.add_argument(
            "--checkpoints",
            help='comma list ("1e4,2e4") or decade range ("1e4..1e8")',
        )
        p.add_argument("--segment-size", help="sieve window length")
        p.add_argument("--threads", type=int, default=None,
                       help="worker threads (default: INVLAB_THREADS or 1)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        common_output(p)

    p = sub.add_parser("count", help="count statistics at checkpoints")
    common_count(p)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("compare", help="counts against asymptotic main terms")
    common_count(p)
    p.add_argument("--P", type=_parse_int, default=DEFAULT_CUTOFF,
                   help="prime cutoff for the constants")
    p.add_argument("--plot", help="also render the ratio figure to this file")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("constants", help="asymptotic constants with bounds")
    p.add_argument("--q", type=int, help="even modulus >= 4")
    p.add_argument("--B", help="comma list of classes mod q for G_B1")
    p.add_argument("--P", type=_parse_int, default=DEFAULT_CUTOFF,
                   help="prime cutoff for the products")
    p.add_argument("--closed-form", action="store_true",
                   help="also print the closed form (q = 4 or 6) and cross-check")
    common_output(p)
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("sd", help="series coefficients lambda_k(z)")
    p.add_argument("--z", required=True, help="exponent z (real or complex)")
    p.add_argument("--N", type=int, required=True, help="order, at most 10")
    p.add_argument("--g0", type=float, default=1.0,
                   help="constant term G(1) of the multiplier")
    common_output(p)
    p.set_defaults(func=cmd_sd)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DomainError, ConfigurationError, PreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConsistencyError as exc:
        print(f"consistency failure: {exc}", file=sys.stderr)
        return 3


def console_main() -> None:
    sys.exit(main())
