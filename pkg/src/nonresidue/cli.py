"""Batch command line: ``nonresidue {scan,reduce,spacing,charsum,count}``.

Every subcommand writes one table as CSV or JSON. Rows are produced
per prime, optionally across a process pool, and always emitted in
ascending order of p so the output does not depend on ``--workers``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from typing import Callable, Sequence

from . import divisors, reduction, scan
from .errors import InternalError, InvalidArgument, PreconditionViolation
from .modarith import ModulusContext, factorize, is_prime, primes_between

EXIT_USAGE = 2
EXIT_INTERNAL = 3


class UsageError(Exception):
    pass


def fmt_real(x: float) -> str:
    return format(x, ".12g")


@dataclass(frozen=True)
class RunConfig:
    command: str
    primes: tuple[int, ...]
    targets: str = "all"
    h_rule: str = "full"
    constant: float = 1.0
    cap: int = 10_000
    k: str = "quad"
    m: int = 2
    x: int | None = None
    t: int | None = None
    c: float | None = None
    rho: float | None = None
    workers: int = 1
    fmt: str = "csv"
    out: str = "-"


def resolve_targets(rule: str, p: int) -> tuple[int, ...]:
    """Targets for p under ``all``, ``first:r`` or an explicit comma list.

    An explicit list keeps only the primes dividing p - 1.
    """
    divs = factorize(p - 1).primes
    if rule == "all":
        return divs
    if rule.startswith("first:"):
        r = int(rule.split(":", 1)[1])
        return divs[:r]
    wanted = [int(s) for s in rule.split(",") if s.strip()]
    return tuple(q for q in divs if q in wanted)


def check_targets_rule(rule: str) -> None:
    try:
        if rule == "all":
            return
        if rule.startswith("first:"):
            if int(rule.split(":", 1)[1]) < 1:
                raise UsageError("first:r needs r >= 1")
            return
        qs = [int(s) for s in rule.split(",") if s.strip()]
    except ValueError:
        raise UsageError(f"bad --targets value {rule!r}") from None
    if not qs or any(not is_prime(q) for q in qs):
        raise UsageError(f"--targets list must name primes, got {rule!r}")


def resolve_h(rule: str, p: int) -> int:
    """Interval length for p: full, half, quarter, sqrt, pow:e or an integer."""
    if rule == "full":
        H = p - 1
    elif rule == "half":
        H = p // 2
    elif rule == "quarter":
        H = p // 4
    elif rule == "sqrt":
        H = math.isqrt(p)
    elif rule.startswith("pow:"):
        H = math.floor(p ** float(rule[4:]))
    else:
        H = int(rule)
    return max(1, min(H, p - 1))


def check_h_rule(rule: str) -> None:
    try:
        resolve_h(rule, 101)
    except ValueError:
        raise UsageError(f"bad --H-rule value {rule!r}") from None


def scan_row(p: int, cfg: RunConfig) -> list[dict]:
    targets = resolve_targets(cfg.targets, p)
    if not targets:
        return []
    g = scan.least_primitive_root(p)
    n = scan.least_simultaneous_nonresidue(p, targets)
    params = scan.theorem_parameters(p, len(targets), cfg.constant)
    return [
        {
            "p": p,
            "r": len(targets),
            "targets": ";".join(map(str, targets)),
            "g": g,
            "n": n,
            "exponent_ratio": math.log(n) / math.log(p),
            "H": params["H"],
            "m": params["m"],
        }
    ]


def reduce_row(p: int, cfg: RunConfig) -> list[dict]:
    targets = resolve_targets(cfg.targets, p)
    if not targets:
        return []
    ctx = ModulusContext.create(p, targets)
    row = {"p": p, "targets": ";".join(map(str, targets))}
    n = reduction.least_reducible(ctx, cfg.cap)
    if n is None:
        row.update(n="none-found", steps=0, final="", chain="")
        return [row]
    steps = reduction.reduction_chain(n, ctx)
    final = steps[-1].n_prime if steps else n
    chain = ">".join(str(v) for v in [n] + [s.n_prime for s in steps])
    row.update(n=n, steps=len(steps), final=final, chain=chain)
    return [row]


def _character_indices(rule: str, p: int) -> list[int]:
    if rule == "quad":
        return [(p - 1) // 2]
    if rule == "all":
        return list(range(1, p - 1))
    k = int(rule)
    if k % (p - 1) == 0:
        return []
    return [k % (p - 1)]


def charsum_row(p: int, cfg: RunConfig) -> list[dict]:
    if p < 3 or p > scan.MAX_TABLE_PRIME:
        return []
    table = scan.discrete_log_table(p, scan.find_primitive_root(p))
    H = resolve_h(cfg.h_rule, p)
    rows = []
    for k in _character_indices(cfg.k, p):
        s = scan.character_partial_sum(p, k, H, table)
        rows.append(
            {
                "p": p,
                "k": k,
                "order": (p - 1) // math.gcd(k, p - 1),
                "H": H,
                "re": s.real,
                "im": s.imag,
                "abs": abs(s),
                "pv_bound": scan.polya_vinogradov_bound(p),
                "burgess_rhs": scan.burgess_rhs(p, H, cfg.m, cfg.constant),
            }
        )
    return rows


def count_row(p: int, cfg: RunConfig) -> list[dict]:
    targets = resolve_targets(cfg.targets, p)
    if not targets:
        return []
    H = resolve_h(cfg.h_rule, p)
    J = scan.count_simultaneous_nonresidues(p, targets, H)
    return [
        {
            "p": p,
            "targets": ";".join(map(str, targets)),
            "H": H,
            "J": J,
            "main_term": scan.main_term(H, targets),
        }
    ]


def spacing_rows(cfg: RunConfig) -> list[dict]:
    x, t, c = cfg.x, cfg.t, cfg.c
    if cfg.rho is not None:
        if t < 2:
            raise InvalidArgument("t must be at least 2")
        rho = cfg.rho
        good = divisors.count_well_spaced(x, t, rho, cfg.workers)
    else:
        res = divisors.spacing_density_experiment(x, t, c, cfg.workers)
        rho, good = res["rho"], res["count_good"]
    clustered: int | str = ""
    if c < 1 / math.log(2):
        clustered = divisors.sharpness_probe(x, t, c, cfg.workers)["count_clustered"]
    return [
        {
            "x": x,
            "t": t,
            "c": c,
            "rho": rho,
            "count_good": good,
            "count_total": x,
            "fraction": good / x,
            "count_clustered": clustered,
        }
    ]


PER_PRIME: dict[str, Callable[[int, RunConfig], list[dict]]] = {
    "scan": scan_row,
    "reduce": reduce_row,
    "charsum": charsum_row,
    "count": count_row,
}

COLUMNS = {
    "scan": ["p", "r", "targets", "g", "n", "exponent_ratio", "H", "m"],
    "reduce": ["p", "targets", "n", "steps", "final", "chain"],
    "charsum": ["p", "k", "order", "H", "re", "im", "abs", "pv_bound", "burgess_rhs"],
    "count": ["p", "targets", "H", "J", "main_term"],
    "spacing": ["x", "t", "c", "rho", "count_good", "count_total", "fraction", "count_clustered"],
}


def run(cfg: RunConfig) -> list[dict]:
    if cfg.command == "spacing":
        return spacing_rows(cfg)
    fn = partial(PER_PRIME[cfg.command], cfg=cfg)
    primes = [p for p in cfg.primes if p >= 3]
    if cfg.workers <= 1 or len(primes) < 2:
        chunks = list(map(fn, primes))
    else:
        with ProcessPoolExecutor(cfg.workers) as pool:
            chunks = list(pool.map(fn, primes, chunksize=max(1, len(primes) // (cfg.workers * 8))))
    return [row for chunk in chunks for row in chunk]


def _cell(v) -> str | int:
    if isinstance(v, float):
        return fmt_real(v)
    return v


def render(rows: Sequence[dict], columns: Sequence[str], fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_cell(row[c]) for c in columns])
        return buf.getvalue()
    out = []
    for row in rows:
        obj = {}
        for c in columns:
            v = row[c]
            obj[c] = float(fmt_real(v)) if isinstance(v, float) else v
        out.append(obj)
    return json.dumps(out, indent=1) + "\n"


def _parse_primes(text: str) -> tuple[int, ...]:
    try:
        ps = sorted({int(s) for s in text.split(",") if s.strip()})
    except ValueError:
        raise UsageError(f"bad --primes value {text!r}") from None
    bad = [p for p in ps if not is_prime(p)]
    if bad:
        raise UsageError(f"not prime: {bad}")
    return tuple(ps)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--lo", type=int, default=3)
    common.add_argument("--hi", type=int)
    common.add_argument("--primes", help="comma-separated explicit primes")
    common.add_argument("--targets", default="all", help="all | first:r | comma list")
    common.add_argument("--out", default="-")
    common.add_argument("--format", dest="fmt", choices=["csv", "json"], default="csv")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--constant", type=float, default=1.0)

    parser = argparse.ArgumentParser(prog="nonresidue", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("scan", parents=[common], help="least primitive root and simultaneous nonresidue per prime")
    p = sub.add_parser("reduce", parents=[common], help="reduction chains by divisor ratios")
    p.add_argument("--cap", type=int, default=10_000)
    p = sub.add_parser("spacing", parents=[common], help="well-spaced divisor density")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--rho", type=float)
    p = sub.add_parser("charsum", parents=[common], help="character partial sums")
    p.add_argument("--k", default="quad", help="quad | all | integer index")
    p.add_argument("--H-rule", dest="h_rule", default="full")
    p.add_argument("--m", type=int, default=2)
    p = sub.add_parser("count", parents=[common], help="exact count J of simultaneous nonresidues")
    p.add_argument("--H-rule", dest="h_rule", default="full")
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    if ns.workers < 1:
        raise UsageError("--workers must be >= 1")
    if ns.primes:
        primes = _parse_primes(ns.primes)
    elif ns.command == "spacing":
        primes = ()
    else:
        if ns.hi is None:
            raise UsageError("give --hi or --primes")
        if ns.hi < ns.lo:
            raise UsageError(f"empty range: --hi {ns.hi} < --lo {ns.lo}")
        primes = tuple(primes_between(ns.lo, ns.hi))
    check_targets_rule(ns.targets)
    extra = {}
    if ns.command in ("charsum", "count"):
        check_h_rule(ns.h_rule)
        extra["h_rule"] = ns.h_rule
    if ns.command == "charsum":
        if ns.k not in ("quad", "all"):
            try:
                int(ns.k)
            except ValueError:
                raise UsageError(f"bad --k value {ns.k!r}") from None
        if ns.m < 1:
            raise UsageError("--m must be >= 1")
        extra.update(k=ns.k, m=ns.m)
    if ns.command == "reduce":
        if ns.cap < 0:
            raise UsageError("--cap must be >= 0")
        extra["cap"] = ns.cap
    if ns.command == "spacing":
        extra.update(x=ns.x, t=ns.t, c=ns.c, rho=ns.rho)
    return RunConfig(
        command=ns.command,
        primes=primes,
        targets=ns.targets,
        constant=ns.constant,
        workers=ns.workers,
        fmt=ns.fmt,
        out=ns.out,
        **extra,
    )


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
        rows = run(cfg)
    except (UsageError, InvalidArgument, PreconditionViolation) as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InternalError as exc:
        print(f"{parser.prog}: internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    text = render(rows, COLUMNS[cfg.command], cfg.fmt)
    if cfg.out == "-":
        sys.stdout.write(text)
    else:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
