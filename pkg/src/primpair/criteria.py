"""Membership criteria for k in Gamma_p(m1, m2), with machine-checkable
certificates.

Every verdict-deciding comparison is exact (integers and Fractions); the
one floating-point criterion (check_cota_t) carries an explicit relative
guard and only fires at astronomically large q where its margin dwarfs the
guard.  Sufficiency inequalities are applied in strict form with both
sides squared, which is the conservative direction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .arith import (
    Factorization,
    euler_phi,
    factorize,
    is_prime,
    primes_below,
)
from . import cache as _cache

__all__ = [
    "ClassifyOptions",
    "IN_GAMMA",
    "NOT_IN_GAMMA",
    "SieveCertificate",
    "TableResult",
    "UNKNOWN",
    "Verdict",
    "check_corollary",
    "check_cota_t",
    "check_mersenne",
    "check_no_gamma",
    "check_phi_density",
    "classify",
    "gamma_table",
    "qm1_factorization",
    "sieve_certificate",
    "sieve_search",
]

IN_GAMMA = "in_gamma"
NOT_IN_GAMMA = "not_in_gamma"
UNKNOWN = "unknown"

# p^k - 1 beyond this is not factored here; the product criterion covers
# everything this large anyway.
FACTOR_BIT_CAP = 100


def qm1_factorization(p: int, k: int) -> Factorization:
    """Factorization of p^k - 1, memoized in-process and optionally on disk."""
    hit = _cache.load_factorization(p, k)
    if hit is not None:
        return hit
    f = factorize(p**k - 1)
    _cache.store_factorization(p, k, f)
    return f


# ---------------------------------------------------------------------------
# Individual criteria


def check_corollary(p: int, k: int, m1: int, m2: int) -> bool:
    """Global square-free-divisor bound: q >= 4 and
    q > ((m1+m2) * W(q-1)^2)^2, compared as exact integers."""
    q = p**k
    if q < 4:
        return False
    w = 1 << len(qm1_factorization(p, k).factors)
    lhs = (m1 + m2) * w * w
    return q > lhs * lhs


@dataclass(frozen=True)
class SieveCertificate:
    """A split of the primes of q-1 witnessing sieve-based membership.

    ell_radical carries the retained primes; sieve_primes the rest.  The
    stored rationals re-derive from the primes, and bound_ok records the
    exact squared comparison q > ((m1+m2) * W(ell)^2 * Delta)^2.
    """

    p: int
    k: int
    m1: int
    m2: int
    ell_radical: int
    sieve_primes: tuple[int, ...]
    delta: Fraction
    Delta: Fraction
    bound_ok: bool

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "k": self.k,
            "m1": self.m1,
            "m2": self.m2,
            "ell_radical": self.ell_radical,
            "sieve_primes": list(self.sieve_primes),
            "delta": str(self.delta),
            "Delta": str(self.Delta),
            "bound_ok": self.bound_ok,
        }


def sieve_certificate(p: int, k: int, m1: int, m2: int, ell_primes) -> SieveCertificate:
    """Certificate for the split retaining exactly ell_primes.

    Raises if the retained set is not a subset of the primes of q-1 or if
    delta is not positive (the sieve hypothesis fails outright there).
    """
    q = p**k
    fact = qm1_factorization(p, k)
    all_primes = set(fact.primes)
    retained = sorted(set(ell_primes))
    if not set(retained) <= all_primes:
        raise ValueError(f"{retained} is not a subset of the primes of q - 1")
    sieve = tuple(r for r in fact.primes if r not in set(retained))
    delta = 1 - 2 * sum(Fraction(1, r) for r in sieve)
    if delta <= 0:
        raise ValueError(f"delta = {delta} is not positive for retained set {retained}")
    r = len(sieve)
    big_delta = Fraction(2 * r - 1) / delta + 2
    ell_radical = 1
    for x in retained:
        ell_radical *= x
    w = 1 << len(retained)
    lhs = (m1 + m2) * w * w * big_delta
    bound_ok = q >= 4 and q > lhs * lhs
    return SieveCertificate(p, k, m1, m2, ell_radical, sieve, delta, big_delta, bound_ok)


def sieve_search(p: int, k: int, m1: int, m2: int) -> SieveCertificate | None:
    """First passing ascending-prefix split of the primes of q-1.

    The prefix of retained primes grows from empty to everything; the first
    split with delta > 0 and the squared bound satisfied wins.  Other
    passing splits may exist; sieve_certificate builds any requested one.
    """
    if p**k < 4:
        return None
    primes = qm1_factorization(p, k).primes
    for s in range(len(primes) + 1):
        try:
            cert = sieve_certificate(p, k, m1, m2, primes[:s])
        except ValueError:
            continue
        if cert.bound_ok:
            return cert
    return None


@lru_cache(maxsize=None)
def _prime_product_constant(t: float) -> float:
    """Product over primes s < 2^t of 2 / s^(1/t).

    Plain double arithmetic; the accumulated error is a few ulps per prime,
    far inside the 1e-9 guard used by check_cota_t.
    """
    limit = 2.0**t
    bound = int(limit) if limit == int(limit) else int(limit) + 1
    a = 1.0
    for s in primes_below(bound):
        a *= 2.0 / s ** (1.0 / t)
    return a


def check_cota_t(
    p: int, k: int, m1: int, m2: int, t: float = 6.0, eps_guard: float = 1e-9
) -> tuple[float, bool]:
    """Prime-product membership threshold: (threshold, q clears it).

    threshold = ((m1+m2) * A^2)^(2t/(t-4)) with A the prime product above;
    passes iff q >= threshold * (1 + eps_guard), compared in log space so
    arbitrarily large q is fine.
    """
    if t <= 4:
        raise ValueError(f"t must exceed 4, got {t}")
    a = _prime_product_constant(t)
    base = (m1 + m2) * a * a
    exponent = 2 * t / (t - 4)
    log_threshold = exponent * math.log(base)
    threshold = math.exp(log_threshold) if log_threshold < 700 else math.inf
    passes = k * math.log(p) >= log_threshold + math.log1p(eps_guard)
    return threshold, passes


def check_no_gamma(p: int, k: int, m1: int, m2: int) -> bool:
    """Exclusion: too few primitive elements, phi(q-1) <= m1 + m2 + 1."""
    q = p**k
    bound = m1 + m2 + 1
    # phi(n) >= sqrt(n/2), so large q can never trigger this
    if q - 1 > 2 * bound * bound + 1:
        return False
    return euler_phi(qm1_factorization(p, k)) <= bound


def check_mersenne(k: int, m1: int, m2: int) -> bool:
    """p = 2 only: 2^k - 1 prime and 2^k - 2 > m1 + m2 + max(m1, m2)."""
    if k <= 1:
        return False
    n = (1 << k) - 1
    return is_prime(n) and n - 1 > m1 + m2 + max(m1, m2)


def check_phi_density(k: int, m1: int, m2: int) -> bool:
    """p = 2 only: phi(q-1) * (1 + 1/max(m1,m2)) > q, exact rationals."""
    q = 1 << k
    phi = euler_phi(qm1_factorization(2, k))
    m = max(m1, m2)
    return phi + Fraction(phi, m) > q


# ---------------------------------------------------------------------------
# Verdicts


@dataclass(frozen=True)
class Verdict:
    p: int
    k: int
    m1: int
    m2: int
    status: str
    reason: str
    certificate: SieveCertificate | None = None
    witness: dict | None = None
    detail: dict | None = None
    attempted: tuple[str, ...] = ()

    def to_json(self) -> dict:
        out = {
            "p": self.p,
            "k": self.k,
            "m1": self.m1,
            "m2": self.m2,
            "status": self.status,
            "reason": self.reason,
        }
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        if self.witness is not None:
            out["witness"] = self.witness
        if self.detail is not None:
            out["detail"] = self.detail
        if self.attempted:
            out["attempted"] = list(self.attempted)
        return out


@dataclass(frozen=True)
class ClassifyOptions:
    t: float = 6.0
    cota_eps: float = 1e-9
    use_brute: bool = True
    brute_pair_cap: int = 10**8
    table_cap: int = 1 << 26


@lru_cache(maxsize=1)
def _registry_witness_16() -> dict:
    """The known failing degree-(1,1) function over the 16-element field:
    (g*x + 1)/(x + g) with g the canonical generator.  No primitive input
    maps to a primitive value, which rules out k = 4 in characteristic 2
    for every degree-bound pair."""
    from .ff import build_field
    from .polyff import poly, rational

    ctx = build_field(2, 4)
    g = ctx.generator
    f = rational(ctx, poly([1, g]), poly([g, 1]))
    return {"p": 2, "k": 4, "function": f.to_json(ctx)}


def _brute_pair_estimate(q: int, m1: int, m2: int) -> int:
    return (q ** (m1 + 1) - 1) * sum(q**d for d in range(m2 + 1))


def classify(
    p: int, k: int, m1: int, m2: int, options: ClassifyOptions | None = None
) -> Verdict:
    """Cascade of exclusion and sufficiency criteria; Unknown lists what ran.

    (m1, m2) is normalized to (max, min) first, which never changes the
    answer.  The cheap large-q product criterion runs before anything that
    needs the factorization of q - 1, so very large k never trigger
    factoring.
    """
    if not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    if k < 1 or m1 < 1 or m2 < 1:
        raise ValueError("k, m1, m2 must all be >= 1")
    opts = options or ClassifyOptions()
    m1, m2 = max(m1, m2), min(m1, m2)
    q = p**k
    attempted: list[str] = []

    attempted.append("phi_too_small")
    if check_no_gamma(p, k, m1, m2):
        phi = euler_phi(qm1_factorization(p, k))
        return Verdict(
            p, k, m1, m2, NOT_IN_GAMMA, "phi_too_small",
            detail={"phi_qm1": phi, "bound": m1 + m2 + 1},
            attempted=tuple(attempted),
        )

    attempted.append("witness_registry")
    if p == 2 and k == 4:
        return Verdict(
            p, k, m1, m2, NOT_IN_GAMMA, "witness",
            witness=_registry_witness_16(),
            attempted=tuple(attempted),
        )

    attempted.append("cota_t")
    threshold, big_enough = check_cota_t(p, k, m1, m2, opts.t, opts.cota_eps)
    if big_enough:
        return Verdict(
            p, k, m1, m2, IN_GAMMA, "cota_t",
            detail={"t": opts.t, "threshold": threshold},
            attempted=tuple(attempted),
        )

    if (q - 1).bit_length() <= FACTOR_BIT_CAP:
        attempted.append("corollary")
        if check_corollary(p, k, m1, m2):
            return Verdict(p, k, m1, m2, IN_GAMMA, "corollary", attempted=tuple(attempted))
        attempted.append("sieve")
        cert = sieve_search(p, k, m1, m2)
        if cert is not None:
            return Verdict(
                p, k, m1, m2, IN_GAMMA, "sieve", certificate=cert, attempted=tuple(attempted)
            )
        if p == 2:
            attempted.append("mersenne")
            if check_mersenne(k, m1, m2):
                return Verdict(p, k, m1, m2, IN_GAMMA, "mersenne", attempted=tuple(attempted))
            attempted.append("phi_density")
            if check_phi_density(k, m1, m2):
                return Verdict(p, k, m1, m2, IN_GAMMA, "phi_density", attempted=tuple(attempted))

    if (
        opts.use_brute
        and q <= opts.table_cap
        and _brute_pair_estimate(q, m1, m2) <= opts.brute_pair_cap
    ):
        attempted.append("brute_force")
        from .certify import certify_k
        from .ff import build_field

        ctx = build_field(p, k, table_cap=opts.table_cap)
        res = certify_k(ctx, m1, m2, pair_cap=opts.brute_pair_cap)
        if res.status == "member":
            return Verdict(p, k, m1, m2, IN_GAMMA, "brute_force", attempted=tuple(attempted))
        return Verdict(
            p, k, m1, m2, NOT_IN_GAMMA, "brute_force",
            witness={"p": p, "k": k, "function": res.counterexample.to_json(ctx)},
            attempted=tuple(attempted),
        )

    return Verdict(p, k, m1, m2, UNKNOWN, "unknown", attempted=tuple(attempted))


@dataclass
class TableResult:
    p: int
    m1: int
    m2: int
    verdicts: list[Verdict] = field(default_factory=list)

    @property
    def partition(self) -> dict[str, list[int]]:
        out: dict[str, list[int]] = {"in": [], "out": [], "unknown": []}
        for v in self.verdicts:
            key = {IN_GAMMA: "in", NOT_IN_GAMMA: "out", UNKNOWN: "unknown"}[v.status]
            out[key].append(v.k)
        return out


DEFAULT_KMAX_LIMIT = 100


def gamma_table(
    p: int,
    m1: int,
    m2: int,
    k_max: int,
    options: ClassifyOptions | None = None,
    k_max_limit: int = DEFAULT_KMAX_LIMIT,
) -> TableResult:
    """One verdict per k = 1..k_max, plus the in/out/unknown partition."""
    if k_max > k_max_limit:
        raise ValueError(f"k_max = {k_max} exceeds limit {k_max_limit}")
    res = TableResult(p, max(m1, m2), min(m1, m2))
    for k in range(1, k_max + 1):
        res.verdicts.append(classify(p, k, m1, m2, options))
    return res
