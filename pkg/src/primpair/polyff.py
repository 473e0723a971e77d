"""Polynomials and rational functions over GF(q).

Coefficients are field-element encodings (see ff), constant term first,
with no trailing zeros; the empty tuple is the zero polynomial.  The zero
polynomial's degree is the distinct sentinel None, never -1, so degree
bound comparisons cannot silently pass.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product
from math import gcd

import numpy as np

from .arith import CapacityError
from .ff import FieldContext

__all__ = [
    "PolyQ",
    "RationalFunction",
    "factor_poly",
    "in_upsilon",
    "lambda_nonempty",
    "monic_irreducibles",
    "np_eval_all",
    "poly",
    "poly_eval",
    "poly_gcd",
    "rat_eval",
    "rational",
]

FACTOR_DEGREE_CAP = 12
_EDF_SEED = 0x5EED


@dataclass(frozen=True)
class PolyQ:
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.coeffs and self.coeffs[-1] == 0:
            raise ValueError("trailing zero coefficient; use poly() to normalize")

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int | None:
        """Degree, or None for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else None

    def leading(self) -> int:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def sort_key(self) -> tuple:
        return (len(self.coeffs), self.coeffs)

    def to_json(self, ctx: FieldContext) -> list[list[int]]:
        return [ctx.coeffs(c) for c in self.coeffs]


ZERO = PolyQ(())
ONE = PolyQ((1,))
X = PolyQ((0, 1))


def poly(coeffs) -> PolyQ:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return PolyQ(tuple(c))


def poly_from_json(ctx: FieldContext, obj) -> PolyQ:
    return poly([ctx.from_coeffs(v) for v in obj])


def poly_add(ctx: FieldContext, a: PolyQ, b: PolyQ) -> PolyQ:
    ca, cb = a.coeffs, b.coeffs
    if len(ca) < len(cb):
        ca, cb = cb, ca
    out = list(ca)
    for i, c in enumerate(cb):
        out[i] = ctx.add(out[i], c)
    return poly(out)


def poly_neg(ctx: FieldContext, a: PolyQ) -> PolyQ:
    return PolyQ(tuple(ctx.neg(c) for c in a.coeffs))


def poly_sub(ctx: FieldContext, a: PolyQ, b: PolyQ) -> PolyQ:
    return poly_add(ctx, a, poly_neg(ctx, b))


def poly_mul(ctx: FieldContext, a: PolyQ, b: PolyQ) -> PolyQ:
    if a.is_zero or b.is_zero:
        return ZERO
    out = [0] * (len(a.coeffs) + len(b.coeffs) - 1)
    for i, x in enumerate(a.coeffs):
        if x:
            for j, y in enumerate(b.coeffs):
                if y:
                    out[i + j] = ctx.add(out[i + j], ctx.mul(x, y))
    return PolyQ(tuple(out))


def poly_scale(ctx: FieldContext, a: PolyQ, c: int) -> PolyQ:
    if c == 0:
        return ZERO
    return PolyQ(tuple(ctx.mul(x, c) for x in a.coeffs))


def poly_divmod(ctx: FieldContext, a: PolyQ, b: PolyQ) -> tuple[PolyQ, PolyQ]:
    if b.is_zero:
        raise ValueError("polynomial division by zero")
    if a.is_zero or len(a.coeffs) < len(b.coeffs):
        return ZERO, a
    rem = list(a.coeffs)
    db = len(b.coeffs) - 1
    inv_lb = ctx.inv(b.leading())
    quot = [0] * (len(rem) - db)
    for i in range(len(rem) - 1, db - 1, -1):
        c = rem[i]
        if c:
            qc = ctx.mul(c, inv_lb)
            quot[i - db] = qc
            for j in range(db + 1):
                rem[i - db + j] = ctx.sub(rem[i - db + j], ctx.mul(qc, b.coeffs[j]))
    return poly(quot), poly(rem)


def poly_mod(ctx: FieldContext, a: PolyQ, b: PolyQ) -> PolyQ:
    return poly_divmod(ctx, a, b)[1]


def poly_monic(ctx: FieldContext, a: PolyQ) -> PolyQ:
    if a.is_zero:
        raise ValueError("cannot make the zero polynomial monic")
    lc = a.leading()
    return a if lc == 1 else poly_scale(ctx, a, ctx.inv(lc))


def poly_gcd(ctx: FieldContext, a: PolyQ, b: PolyQ) -> PolyQ:
    """Monic greatest common divisor; not both arguments zero."""
    if a.is_zero and b.is_zero:
        raise ValueError("gcd(0, 0) is undefined")
    while not b.is_zero:
        a, b = b, poly_mod(ctx, a, b)
    return poly_monic(ctx, a)


def poly_pow_mod(ctx: FieldContext, a: PolyQ, e: int, m: PolyQ) -> PolyQ:
    result = ONE
    a = poly_mod(ctx, a, m)
    while e:
        if e & 1:
            result = poly_mod(ctx, poly_mul(ctx, result, a), m)
        a = poly_mod(ctx, poly_mul(ctx, a, a), m)
        e >>= 1
    return result


def poly_eval(ctx: FieldContext, f: PolyQ, a: int) -> int:
    """Horner evaluation."""
    acc = 0
    for c in reversed(f.coeffs):
        acc = ctx.add(ctx.mul(acc, a), c)
    return acc


def np_eval_all(ctx: FieldContext, f: PolyQ) -> np.ndarray:
    """f evaluated at every element, indexed by encoding."""
    q = ctx.q
    if f.is_zero:
        return np.zeros(q, dtype=np.int64)
    x = np.arange(q, dtype=np.int64)
    acc = np.full(q, f.coeffs[-1], dtype=np.int64)
    add = ctx.np_add_table
    for c in f.coeffs[-2::-1]:
        acc = add[ctx.np_mul_arr(acc, x), c].astype(np.int64)
    return acc


def poly_derivative(ctx: FieldContext, f: PolyQ) -> PolyQ:
    out = []
    for i, c in enumerate(f.coeffs[1:], start=1):
        n = i % ctx.p
        out.append(ctx.mul(c, n) if n else 0)
    return poly(out)


def is_irreducible(ctx: FieldContext, f: PolyQ) -> bool:
    """Rabin criterion over GF(q): x^(q^d) = x mod f plus subfield gcds."""
    d = f.degree()
    if d is None or d < 1:
        return False
    f = poly_monic(ctx, f)
    if d == 1:
        return True
    if f.coeffs[0] == 0:
        return False
    from .arith import factorize

    checkpoints = {d // t for t, _ in factorize(d).factors}
    u = X
    for j in range(1, d + 1):
        u = poly_pow_mod(ctx, u, ctx.q, f)
        if j in checkpoints:
            g = poly_sub(ctx, u, X)
            if not g.is_zero and poly_gcd(ctx, g, f).degree() != 0:
                return False
            if g.is_zero:
                return False
    return u == X


def monic_irreducibles(ctx: FieldContext, max_degree: int, cap: int = 2_000_000) -> list[PolyQ]:
    """All monic irreducibles of degree 1..max_degree, ascending by
    (degree, coefficients compared constant term first)."""
    if max_degree < 1:
        return []
    if ctx.q ** (max_degree + 1) > cap:
        raise CapacityError(
            f"enumerating monic polynomials up to degree {max_degree} over "
            f"GF({ctx.q}) exceeds cap {cap}"
        )
    out = []
    for d in range(1, max_degree + 1):
        for tail in product(range(ctx.q), repeat=d):
            f = PolyQ(tail + (1,))
            if is_irreducible(ctx, f):
                out.append(f)
    return out


# ---------------------------------------------------------------------------
# Factorization: linear roots by scan, then squarefree decomposition,
# distinct-degree splitting, and seeded equal-degree splitting.  Exact and
# deterministic for the small degrees used here.


def _pth_root(ctx: FieldContext, f: PolyQ) -> PolyQ:
    # f = g(x^p); recover g, adjusting coefficients by the inverse Frobenius
    p = ctx.p
    e = p ** (ctx.k - 1)
    return poly([ctx.pow(c, e) for c in f.coeffs[::p]])


def _squarefree_parts(ctx: FieldContext, f: PolyQ) -> list[tuple[PolyQ, int]]:
    """(monic squarefree factor, multiplicity) pairs, characteristic-aware."""
    out: list[tuple[PolyQ, int]] = []
    if f.degree() == 0:
        return out
    d = poly_derivative(ctx, f)
    if d.is_zero:
        for s, m in _squarefree_parts(ctx, _pth_root(ctx, f)):
            out.append((s, m * ctx.p))
        return out
    c = poly_gcd(ctx, f, d)
    w = poly_divmod(ctx, f, c)[0]
    i = 1
    while w.degree() != 0:
        y = poly_gcd(ctx, w, c)
        z = poly_divmod(ctx, w, y)[0]
        if z.degree() != 0:
            out.append((poly_monic(ctx, z), i))
        w = y
        c = poly_divmod(ctx, c, y)[0]
        i += 1
    if c.degree() != 0:
        for s, m in _squarefree_parts(ctx, _pth_root(ctx, c)):
            out.append((s, m * ctx.p))
    return out


def _edf(ctx: FieldContext, f: PolyQ, d: int, rng: random.Random) -> list[PolyQ]:
    """Split a product of distinct degree-d irreducibles."""
    n = f.degree()
    if n == d:
        return [f]
    q = ctx.q
    while True:
        r = poly([rng.randrange(q) for _ in range(n)])
        if r.degree() is None or r.degree() < 1:
            continue
        if ctx.p == 2:
            t = ZERO
            u = poly_mod(ctx, r, f)
            for _ in range(d * ctx.k):
                t = poly_add(ctx, t, u)
                u = poly_mod(ctx, poly_mul(ctx, u, u), f)
            g = poly_gcd(ctx, t, f) if not t.is_zero else ZERO
        else:
            t = poly_pow_mod(ctx, r, (q**d - 1) // 2, f)
            t = poly_sub(ctx, t, ONE)
            g = poly_gcd(ctx, t, f) if not t.is_zero else ZERO
        if not g.is_zero and 0 < g.degree() < n:
            other = poly_divmod(ctx, f, g)[0]
            return _edf(ctx, g, d, rng) + _edf(ctx, other, d, rng)


def factor_poly(
    ctx: FieldContext, f: PolyQ, degree_cap: int = FACTOR_DEGREE_CAP
) -> tuple[int, list[tuple[PolyQ, int]]]:
    """(leading unit, [(monic irreducible, multiplicity), ...]).

    Factors sorted ascending by (degree, coefficients); the product of
    unit * prod(g^m) reconstructs f exactly.
    """
    if f.is_zero:
        raise ValueError("cannot factor the zero polynomial")
    if f.degree() > degree_cap:
        raise CapacityError(f"degree {f.degree()} exceeds factoring cap {degree_cap}")
    unit = f.leading()
    work = poly_monic(ctx, f)
    factors: dict[PolyQ, int] = {}
    for sf, mult in _squarefree_parts(ctx, work):
        rng = random.Random(_EDF_SEED + 31 * sf.degree() + mult)
        rem = sf
        d = 1
        u = X
        while rem.degree() >= 2 * d:
            u = poly_mod(ctx, u, rem)
            u = poly_pow_mod(ctx, u, ctx.q, rem)
            g = poly_gcd(ctx, poly_sub(ctx, u, X), rem) if poly_sub(ctx, u, X).degree() is not None else rem
            if g.degree() and g.degree() > 0:
                for piece in _edf(ctx, g, d, rng):
                    factors[piece] = factors.get(piece, 0) + mult
                rem = poly_divmod(ctx, rem, g)[0]
            d += 1
        if rem.degree() >= 1:
            factors[rem] = factors.get(rem, 0) + mult
    return unit, sorted(factors.items(), key=lambda t: t[0].sort_key())


# ---------------------------------------------------------------------------
# Rational functions and admissibility.


@dataclass(frozen=True)
class RationalFunction:
    """Coprime pair f1/f2 in canonical form (f2 monic)."""

    f1: PolyQ
    f2: PolyQ

    def to_json(self, ctx: FieldContext) -> dict:
        return {"f1": self.f1.to_json(ctx), "f2": self.f2.to_json(ctx)}


def rational(ctx: FieldContext, f1: PolyQ, f2: PolyQ) -> RationalFunction:
    if f2.is_zero:
        raise ValueError("denominator must be nonzero")
    if f1.is_zero:
        if f2.degree() != 0:
            raise ValueError("f1 and f2 must be coprime")
    elif poly_gcd(ctx, f1, f2).degree() != 0:
        raise ValueError("f1 and f2 must be coprime")
    lc = f2.leading()
    if lc != 1:
        c = ctx.inv(lc)
        f1, f2 = poly_scale(ctx, f1, c), poly_scale(ctx, f2, c)
    return RationalFunction(f1, f2)


def rational_from_json(ctx: FieldContext, obj: dict) -> RationalFunction:
    return rational(ctx, poly_from_json(ctx, obj["f1"]), poly_from_json(ctx, obj["f2"]))


def rat_eval(ctx: FieldContext, f: RationalFunction, a: int) -> int | None:
    """f1(a)/f2(a), or None where the denominator vanishes."""
    v2 = poly_eval(ctx, f.f2, a)
    if v2 == 0:
        return None
    return ctx.mul(poly_eval(ctx, f.f1, a), ctx.inv(v2))


def lambda_nonempty(
    ctx: FieldContext, f1: PolyQ, f2: PolyQ
) -> tuple[bool, tuple[int, PolyQ] | None]:
    """Does some monic irreducible g != x divide f1*f2 with exact
    multiplicity n coprime to q-1?  Returns (answer, first witness (n, g))."""
    prod = poly_mul(ctx, f1, f2)
    if prod.is_zero:
        raise ValueError("f1 * f2 must be nonzero")
    _, factors = factor_poly(ctx, prod)
    for g, n in factors:
        if g == X:
            continue
        if gcd(n, ctx.q - 1) == 1:
            return True, (n, g)
    return False, None


def in_upsilon(ctx: FieldContext, f: RationalFunction, m1: int, m2: int) -> bool:
    """Degree bounds, coprimality (by construction), and admissibility."""
    if f.f1.is_zero:
        return False
    if f.f1.degree() > m1 or f.f2.degree() > m2:
        return False
    return lambda_nonempty(ctx, f.f1, f.f2)[0]
