"""Brute-force ground truth: exhaustive search over the admissible
rational functions of a small field.

certify_k decides membership by checking, for every admissible f, whether
some primitive alpha makes (alpha, f(alpha)) a primitive pair.  The scan is
inverted for speed: for each monic denominator the whole numerator grid is
filtered per candidate alpha with numpy masks, and only functions failing
every alpha are then tested for admissibility.  Results are deterministic;
a failing search reports the first counterexample in enumeration order
(numerator-major, then denominator, both by ascending encoding).
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import islice
from math import gcd

import numpy as np

from .arith import CapacityError
from .ff import FieldContext, build_field
from .polyff import (
    ONE,
    X,
    PolyQ,
    RationalFunction,
    factor_poly,
    in_upsilon,
    lambda_nonempty,
    monic_irreducibles,
    poly,
    poly_eval,
    poly_gcd,
    poly_mul,
    rational,
)

__all__ = [
    "CertifyResult",
    "CertifyStats",
    "build_nogamma_witness",
    "certify_k",
    "count_upsilon",
    "enumerate_upsilon",
    "pair_estimate",
    "verify_counterexample",
]

DEFAULT_PAIR_CAP = 10**8
MEMBER = "member"
NON_MEMBER = "non_member"


@dataclass(frozen=True)
class CertifyStats:
    examined: int
    in_upsilon: int
    wall_time: float
    spot_checks: tuple = ()


@dataclass(frozen=True)
class CertifyResult:
    p: int
    k: int
    m1: int
    m2: int
    status: str
    counterexample: RationalFunction | None
    stats: CertifyStats

    def to_json(self, ctx: FieldContext) -> dict:
        out = {
            "p": self.p,
            "k": self.k,
            "m1": self.m1,
            "m2": self.m2,
            "status": self.status,
            "examined": self.stats.examined,
            "in_upsilon": self.stats.in_upsilon,
            "spot_checks": list(self.stats.spot_checks),
        }
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample.to_json(ctx)
        return out


def pair_estimate(q: int, m1: int, m2: int) -> int:
    """Canonical (numerator, monic denominator) pairs scanned by certify_k."""
    return (q ** (m1 + 1) - 1) * sum(q**d for d in range(m2 + 1))


def _poly_from_enc(ctx: FieldContext, enc: int) -> PolyQ:
    q = ctx.q
    coeffs = []
    while enc:
        enc, r = divmod(enc, q)
        coeffs.append(r)
    return poly(coeffs)


def _poly_to_enc(ctx: FieldContext, f: PolyQ) -> int:
    e = 0
    for c in reversed(f.coeffs):
        e = e * ctx.q + c
    return e


def _monic_polys(ctx: FieldContext, max_degree: int) -> list[PolyQ]:
    """Monic polynomials of degree 0..max_degree, ascending encoding."""
    out = []
    q = ctx.q
    for d in range(max_degree + 1):
        for low in range(q**d):
            out.append(_poly_from_enc(ctx, q**d + low) if d else ONE)
    return out


def enumerate_upsilon(ctx: FieldContext, m1: int, m2: int, pair_cap: int = DEFAULT_PAIR_CAP):
    """Every admissible f1/f2 exactly once, canonical (f2 monic), ascending
    by (f1 encoding, f2 encoding)."""
    total = pair_estimate(ctx.q, m1, m2)
    if total > pair_cap:
        raise CapacityError(f"{total} candidate pairs exceed cap {pair_cap}")
    f2s = _monic_polys(ctx, m2)
    for enc1 in range(1, ctx.q ** (m1 + 1)):
        f1 = _poly_from_enc(ctx, enc1)
        for f2 in f2s:
            if f2.degree() > 0 and not f1.is_zero:
                if poly_gcd(ctx, f1, f2).degree() != 0:
                    continue
            if not lambda_nonempty(ctx, f1, f2)[0]:
                continue
            yield RationalFunction(f1, f2)


# ---------------------------------------------------------------------------
# Exact size of the admissible set, without enumerating it.


def _dead_polys(ctx: FieldContext, max_deg: int) -> list[PolyQ]:
    """Nonzero polynomials of degree <= max_deg all of whose non-x
    irreducible factors have multiplicity sharing a factor with q-1."""
    q1 = ctx.q - 1
    bad_exps = [n for n in range(2, max_deg + 1) if gcd(n, q1) > 1]
    irrs = [g for g in monic_irreducibles(ctx, max_deg // 2) if g != X] if max_deg >= 2 else []
    cores: list[PolyQ] = []

    def rec(start: int, cur: PolyQ) -> None:
        cores.append(cur)
        for idx in range(start, len(irrs)):
            g = irrs[idx]
            for n in bad_exps:
                cand = cur
                for _ in range(n):
                    cand = poly_mul(ctx, cand, g)
                if cand.degree() > max_deg:
                    break
                rec(idx + 1, cand)

    rec(0, ONE)
    out = []
    for core in cores:
        for a in range(max_deg - core.degree() + 1):
            shifted = core
            for _ in range(a):
                shifted = poly_mul(ctx, shifted, X)
            for c in range(1, ctx.q):
                out.append(poly([ctx.mul(x, c) for x in shifted.coeffs]))
    return out


def _is_dead(ctx: FieldContext, factors) -> bool:
    q1 = ctx.q - 1
    return all(g == X or gcd(n, q1) > 1 for g, n in factors)


def count_upsilon(ctx: FieldContext, m1: int, m2: int) -> int:
    """|set of admissible f1/f2 with degree bounds (m1, m2)|, exactly.

    For each monic f2: inclusion-exclusion counts the nonzero coprime f1,
    then pairs where both parts lack an admissibility witness are removed
    (those f1 are explicitly enumerable; they are scarce).
    """
    q = ctx.q
    dead1 = _dead_polys(ctx, m1)
    total = 0
    for f2 in _monic_polys(ctx, m2):
        if f2.degree() == 0:
            distinct = []
        else:
            _, factors = factor_poly(ctx, f2)
            distinct = [g for g, _ in factors]
        count = 0
        for mask in range(1 << len(distinct)):
            prod_deg = sum(distinct[i].degree() for i in range(len(distinct)) if mask >> i & 1)
            sign = -1 if bin(mask).count("1") % 2 else 1
            count += sign * (q ** (m1 + 1 - prod_deg) if prod_deg <= m1 else 1)
        if f2.degree() == 0:
            count -= 1  # remove the zero numerator
        if f2.degree() == 0 or _is_dead(ctx, factors):
            for f1 in dead1:
                if f2.degree() == 0 or poly_gcd(ctx, f1, f2).degree() == 0:
                    count -= 1
        total += count
    return total


# ---------------------------------------------------------------------------
# The vectorized membership scan.


def _failing_grid(ctx: FieldContext, m1: int, m2: int, f2_polys) -> list[tuple[int, np.ndarray]]:
    """For each monic f2, numerator encodings with no good primitive alpha."""
    q = ctx.q
    q1 = q - 1
    prim_dlogs = [a for a in range(q1) if gcd(a, q1) == 1]
    alphas = [ctx.exp_table[a] for a in prim_dlogs]
    prim_arr = np.array(alphas, dtype=np.int64)

    n_f1 = q ** (m1 + 1)
    idx = np.arange(n_f1, dtype=np.int64)
    digits = [((idx // q**i) % q).astype(np.int32) for i in range(m1 + 1)]
    add = ctx.np_add_table

    # numerator value grid per alpha
    grids = []
    for alpha in alphas:
        rows = [ctx.np_mul_row(ctx.pow(alpha, i)).astype(np.int32) for i in range(m1 + 1)]
        v = rows[0][digits[0]]
        for i in range(1, m1 + 1):
            v = add[v, rows[i][digits[i]]]
        grids.append(v.astype(np.int16))

    # good-value rows: good[c][v] means v/c is primitive (c = denominator value)
    good = np.zeros((q, q), dtype=bool)
    for c in range(1, q):
        good[c, ctx.np_mul_row(c)[prim_arr]] = True

    out = []
    for f2 in f2_polys:
        alive: np.ndarray | None = None
        for v, alpha in zip(grids, alphas):
            row = good[poly_eval(ctx, f2, alpha)]
            if alive is None:
                alive = np.flatnonzero(~row[v])
            else:
                alive = alive[~row[v[alive]]]
            if alive.size == 0:
                break
        alive = alive[alive != 0]
        if alive.size:
            out.append((_poly_to_enc(ctx, f2), alive))
    return out


_worker_fields: dict[tuple[int, int], FieldContext] = {}


def _scan_chunk(args) -> list[tuple[int, list[int]]]:
    p, k, m1, m2, f2_encs = args
    ctx = _worker_fields.get((p, k))
    if ctx is None:
        ctx = _worker_fields[(p, k)] = build_field(p, k)
    polys = [_poly_from_enc(ctx, e) for e in f2_encs]
    return [(enc, alive.tolist()) for enc, alive in _failing_grid(ctx, m1, m2, polys)]


def certify_k(
    ctx: FieldContext,
    m1: int,
    m2: int,
    pair_cap: int = DEFAULT_PAIR_CAP,
    jobs: int = 1,
    spot_check_size: int = 5,
) -> CertifyResult:
    """Member iff every admissible f admits a primitive pair; otherwise the
    first failing admissible f in enumeration order is returned, re-verified
    before reporting."""
    q = ctx.q
    total = pair_estimate(q, m1, m2)
    if total > pair_cap:
        raise CapacityError(f"{total} candidate pairs exceed cap {pair_cap}")
    t0 = time.perf_counter()
    f2s = _monic_polys(ctx, m2)

    if jobs > 1 and len(f2s) >= 2 * jobs:
        chunks = [f2s[i::jobs] for i in range(jobs)]
        args = [
            (ctx.p, ctx.k, m1, m2, tuple(_poly_to_enc(ctx, f) for f in chunk))
            for chunk in chunks
        ]
        failing: list[tuple[int, np.ndarray]] = []
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for part in pool.map(_scan_chunk, args):
                failing.extend((enc, np.array(alive, dtype=np.int64)) for enc, alive in part)
    else:
        failing = _failing_grid(ctx, m1, m2, f2s)

    counterexample = None
    if failing:
        f1_all = np.concatenate([alive for _, alive in failing])
        f2_all = np.concatenate(
            [np.full(alive.size, enc, dtype=np.int64) for enc, alive in failing]
        )
        order = np.lexsort((f2_all, f1_all))
        for pos in order:
            f1 = _poly_from_enc(ctx, int(f1_all[pos]))
            f2 = _poly_from_enc(ctx, int(f2_all[pos]))
            if f2.degree() > 0 and poly_gcd(ctx, f1, f2).degree() != 0:
                continue
            if not lambda_nonempty(ctx, f1, f2)[0]:
                continue
            counterexample = RationalFunction(f1, f2)
            break

    spot = ()
    if counterexample is None:
        spot = tuple(
            _spot_check(ctx, f) for f in islice(enumerate_upsilon(ctx, m1, m2, pair_cap), spot_check_size)
        )
        status = MEMBER
    else:
        if not verify_counterexample(ctx, counterexample, m1, m2):
            raise AssertionError("counterexample failed re-verification")
        status = NON_MEMBER

    stats = CertifyStats(
        examined=total,
        in_upsilon=count_upsilon(ctx, m1, m2),
        wall_time=time.perf_counter() - t0,
        spot_checks=spot,
    )
    return CertifyResult(ctx.p, ctx.k, m1, m2, status, counterexample, stats)


def _first_good_alpha(ctx: FieldContext, f: RationalFunction) -> int | None:
    q1 = ctx.q - 1
    for a in range(q1):
        if gcd(a, q1) != 1:
            continue
        alpha = ctx.exp_table[a]
        v2 = poly_eval(ctx, f.f2, alpha)
        if v2 == 0:
            continue
        v1 = poly_eval(ctx, f.f1, alpha)
        if v1 == 0:
            continue
        if gcd((ctx.log_table[v1] - ctx.log_table[v2]) % q1, q1) == 1:
            return alpha
    return None


def _spot_check(ctx: FieldContext, f: RationalFunction) -> dict:
    alpha = _first_good_alpha(ctx, f)
    if alpha is None:
        raise AssertionError("spot check found a failing function on the member path")
    return {"f": f.to_json(ctx), "alpha": ctx.coeffs(alpha)}


def verify_counterexample(ctx: FieldContext, f: RationalFunction, m1: int, m2: int) -> bool:
    """Admissible, within bounds, and no primitive alpha yields a primitive
    pair; checked from the definition."""
    if not in_upsilon(ctx, f, m1, m2):
        return False
    return _first_good_alpha(ctx, f) is None


# ---------------------------------------------------------------------------
# Constructive witness for the small-phi exclusion.


def build_nogamma_witness(ctx: FieldContext, m1: int, m2: int) -> RationalFunction | None:
    """When phi(q-1) <= m1 + m2 + 1, build a function with no good alpha.

    Roots of the two parts absorb all primitive elements but possibly one;
    the leftover is sent to 1 by scaling the numerator.  Returns None if
    the construction fails verification (caller falls back to search).
    """
    from .arith import euler_phi

    q1 = ctx.q - 1
    phi = euler_phi(ctx.qm1_factorization)
    if phi > m1 + m2 + 1:
        raise ValueError(f"phi(q-1) = {phi} exceeds m1 + m2 + 1 = {m1 + m2 + 1}")
    prims = [ctx.exp_table[a] for a in range(q1) if gcd(a, q1) == 1]

    def linear_product(roots) -> PolyQ:
        f = ONE
        for r in roots:
            f = poly_mul(ctx, f, poly([ctx.neg(r), 1]))
        return f

    if phi <= m1 + m2:
        n1 = min(m1, phi)
        f1 = linear_product(prims[:n1])
        f2 = linear_product(prims[n1:])
    else:
        f1 = linear_product(prims[:m1])
        f2 = linear_product(prims[m1 : m1 + m2])
        last = prims[-1]
        v1 = poly_eval(ctx, f1, last)
        v2 = poly_eval(ctx, f2, last)
        if v1 == 0 or v2 == 0:
            return None
        # scale so the leftover primitive maps to 1
        beta = ctx.mul(v2, ctx.inv(v1))
        f1 = poly([ctx.mul(c, beta) for c in f1.coeffs])
    try:
        witness = rational(ctx, f1, f2)
    except ValueError:
        return None
    if not verify_counterexample(ctx, witness, m1, m2):
        return None
    return witness
