"""Exact free-pair counts, multiplicative characters, and bound checks.

count_free_pairs enumerates; n_f_via_characters evaluates the character
expansion of the same quantity with complex roots of unity.  The two are
independent routes to N_f and are cross-checked in the test suite.  The
counting domain excludes the zeros of both parts and 0 itself, so the
character identity is exact.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt, pi, sqrt

import numpy as np

from .arith import Factorization, euler_phi, factorize, squarefree_divisors, theta
from .ff import FieldContext
from .polyff import PolyQ, RationalFunction, np_eval_all

__all__ = [
    "CharacterIndex",
    "FreePairCount",
    "character_sum",
    "characters_of_order",
    "chi_value",
    "count_free_pairs",
    "free_dlog_mask",
    "free_pair_profile",
    "n_f_via_characters",
    "nf_lower_bound",
    "ramanujan_table",
    "rho_s",
    "sieve_inequality_check",
]


@dataclass(frozen=True)
class CharacterIndex:
    """Multiplicative character chi_n(g^a) = exp(2*pi*i * n*a / (q-1))."""

    n: int
    order: int


@dataclass(frozen=True)
class FreePairCount:
    l1: int
    l2: int
    count: int
    lower_bound: Fraction | None


def _check_divisor(ctx: FieldContext, l: int) -> None:
    if l < 1 or (ctx.q - 1) % l:
        raise ValueError(f"{l} does not divide q - 1 = {ctx.q - 1}")


def characters_of_order(ctx: FieldContext, d: int) -> list[CharacterIndex]:
    """The phi(d) characters of exact order d, ascending index."""
    _check_divisor(ctx, d)
    q1 = ctx.q - 1
    step = q1 // d
    return [CharacterIndex(step * j % q1, d) for j in range(1, d + 1) if gcd(j, d) == 1]


def chi_value(ctx: FieldContext, chi: CharacterIndex, a: int) -> complex:
    """chi evaluated at a nonzero element."""
    q1 = ctx.q - 1
    return cmath.exp(2j * pi * (chi.n * ctx.dlog(a) % q1) / q1)


def rho_s(ctx: FieldContext, a: int, s: int) -> complex:
    """Characteristic function of the s-free elements, by characters.

    Within 1e-9 of 1 when a is s-free, else of 0.
    """
    _check_divisor(ctx, s)
    if not 0 < a < ctx.q:
        raise ValueError("rho_s is defined on nonzero elements only")
    sf = factorize(s)
    total = 0j
    for d, mu in squarefree_divisors(sf):
        inner = sum(chi_value(ctx, chi, a) for chi in characters_of_order(ctx, d))
        total += mu / euler_phi(factorize(d)) * inner
    return float(theta(sf)) * total


# ---------------------------------------------------------------------------
# Counting


def free_dlog_mask(ctx: FieldContext, l: int) -> np.ndarray:
    """Boolean table over dlog values: True where g^a is l-free."""
    _check_divisor(ctx, l)
    rad = 1
    for r in ctx.qm1_factorization.primes:
        if l % r == 0:
            rad *= r
    key = ("free_mask", rad)
    if key not in ctx._cache:
        a = np.arange(ctx.q - 1, dtype=np.int64)
        mask = np.ones(ctx.q - 1, dtype=bool)
        for r in ctx.qm1_factorization.primes:
            if rad % r == 0:
                mask &= (a % r) != 0
        ctx._cache[key] = mask
    return ctx._cache[key]


def free_pair_profile(ctx: FieldContext, f: RationalFunction) -> tuple[np.ndarray, np.ndarray]:
    """(dlog alpha, dlog f(alpha)) over all alpha outside the excluded set
    (zeros of either part, and 0)."""
    q = ctx.q
    v1 = np_eval_all(ctx, f.f1)
    v2 = np_eval_all(ctx, f.f2)
    enc = np.arange(q, dtype=np.int64)
    ok = (enc != 0) & (v1 != 0) & (v2 != 0)
    a = ctx.np_log[enc[ok]]
    b = (ctx.np_log[v1[ok]] - ctx.np_log[v2[ok]]) % (q - 1)
    return a, b


def count_free_pairs(
    ctx: FieldContext,
    f: RationalFunction,
    l1: int,
    l2: int,
    profile: tuple[np.ndarray, np.ndarray] | None = None,
) -> FreePairCount:
    """Exact number of alpha with alpha l1-free and f(alpha) l2-free."""
    _check_divisor(ctx, l1)
    _check_divisor(ctx, l2)
    a, b = profile if profile is not None else free_pair_profile(ctx, f)
    count = int((free_dlog_mask(ctx, l1)[a] & free_dlog_mask(ctx, l2)[b]).sum())
    bound = None
    if ctx.q >= 4 and not f.f1.is_zero:
        m1 = max(1, f.f1.degree())
        m2 = max(1, f.f2.degree())
        bound = nf_lower_bound(ctx.q, m1, m2, factorize(l1), factorize(l2))
    return FreePairCount(l1, l2, count, bound)


# ---------------------------------------------------------------------------
# Character route to the same count


def ramanujan_table(ctx: FieldContext, d: int) -> np.ndarray:
    """R[a] = sum over characters chi of exact order d of chi(g^a).

    Complex array of length q-1, cached per field.
    """
    _check_divisor(ctx, d)
    key = ("ramanujan", d)
    if key not in ctx._cache:
        a = np.arange(ctx.q - 1, dtype=np.int64)
        total = np.zeros(ctx.q - 1, dtype=np.complex128)
        for j in range(1, d + 1):
            if gcd(j, d) == 1:
                total += np.exp(2j * pi * (j * (a % d)) / d)
        ctx._cache[key] = total
    return ctx._cache[key]


def n_f_via_characters(
    ctx: FieldContext,
    f: RationalFunction,
    l1: int,
    l2: int,
    profile: tuple[np.ndarray, np.ndarray] | None = None,
) -> complex:
    """N_f(l1, l2) through the character expansion; complex, close to the
    integer count from count_free_pairs."""
    _check_divisor(ctx, l1)
    _check_divisor(ctx, l2)
    a, b = profile if profile is not None else free_pair_profile(ctx, f)
    f1, f2 = factorize(l1), factorize(l2)
    total = 0j
    for d1, mu1 in squarefree_divisors(f1):
        t1 = ramanujan_table(ctx, d1)[a]
        w1 = mu1 / euler_phi(factorize(d1))
        for d2, mu2 in squarefree_divisors(f2):
            t2 = ramanujan_table(ctx, d2)[b]
            w2 = mu2 / euler_phi(factorize(d2))
            total += w1 * w2 * np.dot(t1, t2)
    return float(theta(f1)) * float(theta(f2)) * total


def character_sum(
    ctx: FieldContext,
    h_factors: list[tuple[PolyQ, int]],
    chi: CharacterIndex,
) -> tuple[complex, float]:
    """Sum of chi(h(alpha)) over alpha with h defined and nonzero, for h
    given in factored form [(irreducible or x, exponent), ...].

    Returns (sum, budget) where budget = (sum of factor degrees - 1) * sqrt(q);
    the bound applies when chi is nontrivial and h is not a full
    ord(chi)-power in the algebraic closure.
    """
    if chi.order == 1:
        raise ValueError("the bound does not apply to the trivial character")
    if any(n == 0 for _, n in h_factors):
        raise ValueError("exponents must be nonzero")
    from .polyff import poly_eval

    q1 = ctx.q - 1
    total = 0j
    for enc in range(ctx.q):
        e = 0
        ok = True
        for hj, nj in h_factors:
            v = poly_eval(ctx, hj, enc)
            if v == 0:
                ok = False
                break
            e += nj * ctx.log_table[v]
        if ok:
            total += cmath.exp(2j * pi * (chi.n * e % q1) / q1)
    budget = (sum(hj.degree() for hj, _ in h_factors) - 1) * sqrt(ctx.q)
    return total, budget


# ---------------------------------------------------------------------------
# Bounds


def _sqrt_upper(q: int) -> Fraction:
    """Rational r >= sqrt(q); exact for perfect squares, else within 1e-10."""
    s = isqrt(q)
    if s * s == q:
        return Fraction(s)
    t = isqrt(q * 10**20)
    return Fraction(t + 1, 10**10)


def nf_lower_bound(
    q: int, m1: int, m2: int, l1_fact: Factorization, l2_fact: Factorization
) -> Fraction:
    """Exact-rational lower bound for N_f(l1, l2) over any admissible f with
    degree bounds (m1, m2); rigorous because sqrt(q) is over-approximated."""
    if q < 4:
        raise ValueError("the bound requires q >= 4")
    w1 = 1 << len(l1_fact.factors)
    w2 = 1 << len(l2_fact.factors)
    r = _sqrt_upper(q)
    core = q - (m1 + m2 + 1) - (m1 + m2) * r * (w1 * w2 - 1)
    return theta(l1_fact) * theta(l2_fact) * core


def sieve_inequality_check(
    ctx: FieldContext,
    f: RationalFunction,
    ell_fact: Factorization,
    sieve_primes,
) -> tuple[int, int]:
    """Both sides of the sieve inequality, computed exactly.

    lhs = N_f(q-1, q-1); rhs combines the counts at ell refined by each
    sieve prime.  sieve_primes must be exactly the primes of q-1 not
    dividing ell.  With no sieve primes the right side degenerates to
    N_f(ell, ell), equal to lhs by radical invariance.
    """
    q1 = ctx.q - 1
    ell = ell_fact.value
    if q1 % ell:
        raise ValueError(f"ell = {ell} does not divide q - 1 = {q1}")
    expected = [r for r in ctx.qm1_factorization.primes if ell % r != 0]
    got = sorted(sieve_primes)
    if got != expected:
        raise ValueError(f"sieve primes {got} should be {expected}")
    prof = free_pair_profile(ctx, f)
    cnt = lambda a, b: count_free_pairs(ctx, f, a, b, profile=prof).count
    lhs = cnt(q1, q1)
    if not got:
        return lhs, cnt(ell, ell)
    r = len(got)
    rhs = -(2 * r - 1) * cnt(ell, ell)
    for p in got:
        rhs += cnt(p * ell, ell) + cnt(ell, p * ell)
    return lhs, rhs
