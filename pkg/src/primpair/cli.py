"""Command-line surface: classify, table, certify, verify, factor.

Machine output is JSON lines (integers as decimal strings, so 64-bit-plus
values survive every consumer); `table` can also emit CSV or an aligned
pretty listing.  Given the same configuration (including --seed) the
stdout byte stream is identical across runs; wall-clock timings go to
stderr only.

Exit codes: 0 = computation completed (whatever the verdict),
1 = usage/domain error, 2 = capacity error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from dataclasses import dataclass, fields
from fractions import Fraction

from .arith import CapacityError, factorize
from .certify import certify_k, pair_estimate, verify_counterexample
from .criteria import ClassifyOptions, classify, gamma_table
from .ff import DEFAULT_TABLE_CAP, build_field
from .pairs import (
    character_sum,
    characters_of_order,
    count_free_pairs,
    free_pair_profile,
    n_f_via_characters,
    nf_lower_bound,
    sieve_inequality_check,
)
from .polyff import monic_irreducibles, poly, rational
from .arith import squarefree_divisors

__all__ = ["RunConfig", "main", "run"]


@dataclass
class RunConfig:
    command: str
    p: int = 2
    k: int = 1
    kmax: int = 10
    m1: int = 1
    m2: int = 1
    t: float = 6.0
    seed: int = 0
    jobs: int = 1
    pair_cap: int = 10**8
    table_cap: int = DEFAULT_TABLE_CAP
    brute: bool = True
    fmt: str = "json"
    out: str | None = None
    n: int = 1
    functions: int = 25


def _stringify(obj):
    """Deep-convert for JSON: ints to decimal strings, Fractions to 'a/b'."""
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, float):
        return obj
    if isinstance(obj, dict):
        return {k: _stringify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_stringify(v) for v in obj]
    return obj


def _emit(stream, record: dict) -> None:
    stream.write(json.dumps(_stringify(record)) + "\n")


def _verdict_row(v) -> dict:
    row = {
        "k": v.k,
        "status": v.status,
        "reason": v.reason,
        "ell": "",
        "sieve_primes": "",
        "delta": "",
        "Delta": "",
    }
    if v.certificate is not None:
        c = v.certificate
        row["ell"] = str(c.ell_radical)
        row["sieve_primes"] = ";".join(str(r) for r in c.sieve_primes)
        row["delta"] = f"{c.delta.numerator}/{c.delta.denominator}"
        row["Delta"] = f"{c.Delta.numerator}/{c.Delta.denominator}"
    return row


def _run_classify(cfg: RunConfig, out) -> int:
    opts = ClassifyOptions(
        t=cfg.t, use_brute=cfg.brute, brute_pair_cap=cfg.pair_cap, table_cap=cfg.table_cap
    )
    verdict = classify(cfg.p, cfg.k, cfg.m1, cfg.m2, opts)
    if cfg.fmt == "pretty":
        out.write(
            f"p={verdict.p} k={verdict.k} (m1,m2)=({verdict.m1},{verdict.m2}) "
            f"-> {verdict.status} [{verdict.reason}]\n"
        )
    else:
        _emit(out, verdict.to_json())
    return 0


def _run_table(cfg: RunConfig, out) -> int:
    opts = ClassifyOptions(
        t=cfg.t, use_brute=cfg.brute, brute_pair_cap=cfg.pair_cap, table_cap=cfg.table_cap
    )
    res = gamma_table(cfg.p, cfg.m1, cfg.m2, cfg.kmax, opts)
    rows = [_verdict_row(v) for v in res.verdicts]
    if cfg.fmt == "csv":
        writer = csv.DictWriter(
            out, fieldnames=["k", "status", "reason", "ell", "sieve_primes", "delta", "Delta"]
        )
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
    elif cfg.fmt == "pretty":
        out.write(f"Gamma_{cfg.p}({res.m1},{res.m2}) up to k = {cfg.kmax}\n")
        out.write(f"{'k':>4} {'status':<14} {'reason':<14} {'ell':>8}  sieve primes\n")
        for row in rows:
            out.write(
                f"{row['k']:>4} {row['status']:<14} {row['reason']:<14} "
                f"{row['ell']:>8}  {row['sieve_primes']}\n"
            )
        part = res.partition
        out.write(
            f"in: {len(part['in'])}  out: {len(part['out'])}  unknown: {part['unknown']}\n"
        )
    else:
        for v, row in zip(res.verdicts, rows):
            _emit(out, {**row, "p": cfg.p, "m1": res.m1, "m2": res.m2})
        _emit(out, {"summary": res.partition, "p": cfg.p, "m1": res.m1, "m2": res.m2})
    return 0


def _run_certify(cfg: RunConfig, out) -> int:
    ctx = build_field(cfg.p, cfg.k, table_cap=cfg.table_cap)
    res = certify_k(ctx, cfg.m1, cfg.m2, pair_cap=cfg.pair_cap, jobs=cfg.jobs)
    print(f"certify p={cfg.p} k={cfg.k}: {res.stats.wall_time:.2f}s", file=sys.stderr)
    _emit(out, res.to_json(ctx))
    return 0


def _random_rational(ctx, rng: random.Random, m1: int, m2: int):
    q = ctx.q
    while True:
        f1 = poly([rng.randrange(q) for _ in range(m1 + 1)])
        f2 = poly([rng.randrange(q) for _ in range(m2)] + [1])
        if f1.is_zero:
            continue
        try:
            return rational(ctx, f1, f2)
        except ValueError:
            continue


def _run_verify(cfg: RunConfig, out) -> int:
    ctx = build_field(cfg.p, cfg.k, table_cap=cfg.table_cap)
    rng = random.Random(cfg.seed)
    q1 = ctx.q - 1
    sqfree = [d for d, _ in squarefree_divisors(ctx.qm1_factorization)]
    status = 0

    for _ in range(cfg.functions):
        f = _random_rational(ctx, rng, cfg.m1, cfg.m2)
        fj = f.to_json(ctx)
        prof = free_pair_profile(ctx, f)
        pairs = [(l1, l2) for l1 in sqfree for l2 in sqfree]
        if len(pairs) > 16:
            pairs = rng.sample(pairs, 16)
        for l1, l2 in sorted(pairs):
            exact = count_free_pairs(ctx, f, l1, l2, profile=prof)
            approx = n_f_via_characters(ctx, f, l1, l2, profile=prof)
            ok = abs(approx - exact.count) < 1e-6 * ctx.q
            _emit(out, {
                "check": "character_identity", "q": ctx.q, "f": fj,
                "l1": l1, "l2": l2, "lhs": float(abs(approx)), "rhs": exact.count,
                "pass": bool(ok),
            })
            status |= 0 if ok else 1
            if exact.lower_bound is not None:
                ok = exact.count >= exact.lower_bound
                _emit(out, {
                    "check": "lower_bound", "q": ctx.q, "f": fj,
                    "l1": l1, "l2": l2, "lhs": exact.count, "rhs": exact.lower_bound,
                    "pass": bool(ok),
                })
                status |= 0 if ok else 1
        for ell in sqfree:
            primes = [r for r in ctx.qm1_factorization.primes if ell % r != 0]
            lhs, rhs = sieve_inequality_check(ctx, f, factorize(ell), primes)
            ok = lhs >= rhs
            _emit(out, {
                "check": "sieve_inequality", "q": ctx.q, "f": fj,
                "l1": ell, "l2": ell, "lhs": lhs, "rhs": rhs, "pass": bool(ok),
            })
            status |= 0 if ok else 1

    irr = monic_irreducibles(ctx, 2)
    for _ in range(cfg.functions):
        hs = rng.sample(irr, min(2, len(irr)))
        exps = [rng.choice([-2, -1, 1, 2]) for _ in hs]
        chi = rng.choice([c for d in sqfree if d > 1 for c in characters_of_order(ctx, d)])
        if all(n % chi.order == 0 for n in exps):
            continue
        value, budget = character_sum(ctx, list(zip(hs, exps)), chi)
        ok = abs(value) <= budget + 1e-9
        _emit(out, {
            "check": "weil_bound", "q": ctx.q,
            "f": {"factors": [[h.to_json(ctx), n] for h, n in zip(hs, exps)]},
            "l1": None, "l2": None, "lhs": float(abs(value)), "rhs": budget,
            "pass": bool(ok),
        })
        status |= 0 if ok else 1
    return status


def _run_factor(cfg: RunConfig, out) -> int:
    _emit(out, factorize(cfg.n).to_json())
    return 0


def run(cfg: RunConfig) -> int:
    handlers = {
        "classify": _run_classify,
        "table": _run_table,
        "certify": _run_certify,
        "verify": _run_verify,
        "factor": _run_factor,
    }
    buffer = io.StringIO()
    code = handlers[cfg.command](cfg, buffer)
    text = buffer.getvalue()
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _build_parser() -> _Parser:
    parser = _Parser(prog="primpair", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, k_flag=True):
        sp.add_argument("-p", type=int, required=True)
        if k_flag:
            sp.add_argument("-k", type=int, required=True)
        sp.add_argument("--m1", type=int, default=1)
        sp.add_argument("--m2", type=int, default=1)
        sp.add_argument("--table-cap", type=int, default=DEFAULT_TABLE_CAP, dest="table_cap")

    sp = sub.add_parser("classify", help="decide one (p, k)")
    common(sp)
    sp.add_argument("--t", type=float, default=6.0)
    sp.add_argument("--brute-cap", type=int, default=10**8, dest="pair_cap")
    sp.add_argument("--no-brute", action="store_false", dest="brute")
    sp.add_argument("--format", choices=["json", "pretty"], default="json", dest="fmt")

    sp = sub.add_parser("table", help="verdicts for k = 1..kmax")
    common(sp, k_flag=False)
    sp.add_argument("--kmax", type=int, required=True)
    sp.add_argument("--t", type=float, default=6.0)
    sp.add_argument("--brute-cap", type=int, default=10**8, dest="pair_cap")
    sp.add_argument("--no-brute", action="store_false", dest="brute")
    sp.add_argument("--format", choices=["json", "csv", "pretty"], default="csv", dest="fmt")
    sp.add_argument("--out", default=None)

    sp = sub.add_parser("certify", help="exhaustive search over one field")
    common(sp)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--cap", type=int, default=10**8, dest="pair_cap")

    sp = sub.add_parser("verify", help="numeric identities and bounds on random functions")
    common(sp)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--functions", type=int, default=25)

    sp = sub.add_parser("factor", help="factor an integer")
    sp.add_argument("n", type=int)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    ns = parser.parse_args(argv)
    known = {f.name for f in fields(RunConfig)}
    cfg = RunConfig(**{k: v for k, v in vars(ns).items() if k in known and v is not None})
    try:
        return run(cfg)
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
