"""Explicit construction of GF(p^k) with full exp/log tables.

Elements are integers in [0, q).  The base-p digits of an element are its
coordinates in the power basis of the modulus, least significant digit =
constant coordinate; 0 encodes the zero element.  All counting operations
downstream reduce to integer arithmetic on discrete logs.
"""

from __future__ import annotations

from functools import cached_property
from itertools import product
from math import gcd

import numpy as np

from .arith import CapacityError, Factorization, factorize, is_prime

__all__ = ["DEFAULT_TABLE_CAP", "FieldContext", "build_field"]

DEFAULT_TABLE_CAP = 1 << 26
_NP_ADD_TABLE_CAP = 2048


# ---------------------------------------------------------------------------
# Polynomial helpers over the prime field Z/p (dense coefficient tuples,
# constant term first).  Used only for modulus search and validation.


def _fp_trim(c: list[int]) -> tuple[int, ...]:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _fp_mod(a: tuple[int, ...], m: tuple[int, ...], p: int) -> tuple[int, ...]:
    # m monic
    a = list(a)
    dm = len(m) - 1
    while len(a) - 1 >= dm and a:
        c = a[-1]
        if c:
            off = len(a) - 1 - dm
            for j in range(dm + 1):
                a[off + j] = (a[off + j] - c * m[j]) % p
        a.pop()
    return _fp_trim(a)


def _fp_mulmod(a, b, m, p) -> tuple[int, ...]:
    if not a or not b:
        return ()
    res = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                res[i + j] = (res[i + j] + x * y) % p
    return _fp_mod(_fp_trim(res), m, p)


def _fp_powmod(a, e: int, m, p) -> tuple[int, ...]:
    result: tuple[int, ...] = (1,)
    base = _fp_mod(a, m, p)
    while e:
        if e & 1:
            result = _fp_mulmod(result, base, m, p)
        base = _fp_mulmod(base, base, m, p)
        e >>= 1
    return result


def _fp_gcd(a, b, p) -> tuple[int, ...]:
    a, b = _fp_trim(list(a)), _fp_trim(list(b))
    while b:
        # reduce a mod b after making b monic
        lb = b[-1]
        if lb != 1:
            inv = pow(lb, p - 2, p)
            b = tuple((c * inv) % p for c in b)
        a, b = b, _fp_mod(a, b, p)
    return a


def _fp_is_irreducible(f: tuple[int, ...], p: int) -> bool:
    """Rabin test: x^(p^k) = x mod f and gcd(x^(p^(k/t)) - x, f) = 1."""
    k = len(f) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    if f[0] == 0:  # divisible by x
        return False
    checkpoints = {k // t for t, _ in factorize(k).factors}
    x = (0, 1)
    u = x
    for j in range(1, k + 1):
        u = _fp_powmod(u, p, f, p)
        if j in checkpoints:
            diff = list(u) + [0] * max(0, 2 - len(u))
            diff[1] = (diff[1] - 1) % p
            g = _fp_gcd(_fp_trim(diff), f, p)
            if len(g) != 1:
                return False
    return u == x


# ---------------------------------------------------------------------------


class FieldContext:
    """A fully materialized GF(p^k): modulus, generator, dlog tables.

    The modulus is the lexicographically smallest monic irreducible of
    degree k (coefficients compared constant term first); the generator is
    the lexicographically smallest coordinate vector of full multiplicative
    order.  Both tie-breaks make witnesses reproducible across runs.
    Instances are immutable after construction and safe to share.
    """

    def __init__(
        self,
        p: int,
        k: int,
        *,
        table_cap: int = DEFAULT_TABLE_CAP,
        modulus: tuple[int, ...] | None = None,
        generator: int | None = None,
    ) -> None:
        if not is_prime(p):
            raise ValueError(f"p must be prime, got {p}")
        if k < 1:
            raise ValueError(f"k must be >= 1, got {k}")
        q = p**k
        if q > table_cap:
            raise CapacityError(f"q = {p}^{k} = {q} exceeds table cap {table_cap}")
        self.p = p
        self.k = k
        self.q = q
        self.qm1_factorization: Factorization = factorize(q - 1)
        self._cache: dict = {}

        if modulus is not None:
            m = tuple(c % p for c in modulus)
            if len(m) != k + 1 or m[-1] != 1 or not _fp_is_irreducible(m, p):
                raise ValueError("modulus must be a monic irreducible of degree k")
            self.modulus = m
        else:
            self.modulus = self._find_modulus()

        if k >= 2:
            self._red_rows = self._reduction_rows()
            if p == 2:
                self._mod_mask = sum(c << i for i, c in enumerate(self.modulus))

        if generator is not None:
            if not (0 < generator < q) or not self._has_full_order(generator):
                raise ValueError("generator does not have multiplicative order q-1")
            self.generator = generator
        else:
            self.generator = self._find_generator()

        self._build_tables()

    # -- construction ------------------------------------------------------

    def _find_modulus(self) -> tuple[int, ...]:
        p, k = self.p, self.k
        for tail in product(range(p), repeat=k):
            cand = tail + (1,)
            if _fp_is_irreducible(cand, p):
                return cand
        raise AssertionError("no irreducible polynomial found")  # unreachable

    def _reduction_rows(self) -> list[list[int]]:
        # rows[i] = coordinates of x^(k+i) mod modulus, i = 0..k-2
        p, k, m = self.p, self.k, self.modulus
        row0 = [(-m[j]) % p for j in range(k)]
        rows = [row0]
        for _ in range(k - 2):
            prev = rows[-1]
            t = [0] + prev[:-1]
            c = prev[-1]
            if c:
                for j in range(k):
                    t[j] = (t[j] + c * row0[j]) % p
            rows.append(t)
        return rows

    def _digits(self, a: int) -> list[int]:
        p = self.p
        out = []
        for _ in range(self.k):
            a, r = divmod(a, p)
            out.append(r)
        return out

    def _encode(self, digits) -> int:
        e = 0
        for d in reversed(digits):
            e = e * self.p + d
        return e

    def _raw_mul(self, a: int, b: int) -> int:
        """Product via polynomial multiplication mod the modulus."""
        if a == 0 or b == 0:
            return 0
        p, k = self.p, self.k
        if k == 1:
            return a * b % p
        if p == 2:
            r = 0
            while b:
                if b & 1:
                    r ^= a
                a <<= 1
                b >>= 1
            mask = self._mod_mask
            top = r.bit_length()
            while top > k:
                r ^= mask << (top - 1 - k)
                top = r.bit_length()
            return r
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        res = prod[:k]
        for i in range(k - 1):
            c = prod[k + i]
            if c:
                row = self._red_rows[i]
                for j in range(k):
                    res[j] = (res[j] + c * row[j]) % p
        return self._encode(res)

    def _raw_pow(self, a: int, e: int) -> int:
        result = 1
        while e:
            if e & 1:
                result = self._raw_mul(result, a)
            a = self._raw_mul(a, a)
            e >>= 1
        return result

    def _has_full_order(self, a: int) -> bool:
        n = self.q - 1
        if self._raw_pow(a, n) != 1:
            return False
        return all(self._raw_pow(a, n // r) != 1 for r in self.qm1_factorization.primes)

    def _find_generator(self) -> int:
        for tail in product(range(self.p), repeat=self.k):
            a = self._encode(tail)
            if a and self._has_full_order(a):
                return a
        raise AssertionError("no generator found")  # unreachable

    def _build_tables(self) -> None:
        q = self.q
        exp = [0] * (q - 1)
        log = [-1] * q
        cur = 1
        for a in range(q - 1):
            exp[a] = cur
            log[cur] = a
            cur = self._raw_mul(cur, self.generator)
        if cur != 1:
            raise ValueError("generator does not have multiplicative order q-1")
        self.exp_table = exp
        self.log_table = log

    # -- field operations ----------------------------------------------------

    def add(self, a: int, b: int) -> int:
        p = self.p
        if p == 2:
            return a ^ b
        if self.k == 1:
            return (a + b) % p
        da, db = self._digits(a), self._digits(b)
        return self._encode([(x + y) % p for x, y in zip(da, db)])

    def neg(self, a: int) -> int:
        p = self.p
        if p == 2:
            return a
        if self.k == 1:
            return (-a) % p
        return self._encode([(-d) % p for d in self._digits(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        s = self.log_table[a] + self.log_table[b]
        n = self.q - 1
        if s >= n:
            s -= n
        return self.exp_table[s]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ValueError("0 has no multiplicative inverse")
        return self.exp_table[-self.log_table[a] % (self.q - 1)]

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ValueError("0 has no multiplicative inverse")
            return 1 if e == 0 else 0
        return self.exp_table[self.log_table[a] * e % (self.q - 1)]

    def dlog(self, a: int) -> int:
        """Discrete log base the generator; a must be nonzero."""
        if not 0 < a < self.q:
            raise ValueError(f"dlog undefined for {a}")
        return self.log_table[a]

    def gen_pow(self, e: int) -> int:
        return self.exp_table[e % (self.q - 1)]

    def is_primitive(self, a: int) -> bool:
        return a != 0 and gcd(self.log_table[a], self.q - 1) == 1

    def is_s_free(self, a: int, s: int) -> bool:
        """True iff no d-th root of a exists for any divisor d != 1 of s.

        Equivalently: no prime of s divides dlog(a).
        """
        n = self.q - 1
        if s < 1 or n % s:
            raise ValueError(f"s = {s} does not divide q - 1 = {n}")
        if not 0 < a < self.q:
            raise ValueError("s-free is defined on nonzero elements only")
        la = self.log_table[a]
        return all(la % r for r in self.qm1_factorization.primes if s % r == 0)

    # -- coordinates and serialization --------------------------------------

    def coeffs(self, a: int) -> list[int]:
        if not 0 <= a < self.q:
            raise ValueError(f"{a} is not an element encoding")
        return self._digits(a)

    def from_coeffs(self, coords) -> int:
        coords = list(coords)
        if len(coords) != self.k or any(not 0 <= c < self.p for c in coords):
            raise ValueError("need k coordinates in [0, p)")
        return self._encode(coords)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "k": self.k,
            "modulus": list(self.modulus),
            "generator": self.coeffs(self.generator),
        }

    @classmethod
    def from_json(cls, obj: dict, *, table_cap: int = DEFAULT_TABLE_CAP) -> "FieldContext":
        p, k = int(obj["p"]), int(obj["k"])
        gen = 0
        for c in reversed([int(c) for c in obj["generator"]]):
            gen = gen * p + c
        return cls(
            p,
            k,
            table_cap=table_cap,
            modulus=tuple(int(c) for c in obj["modulus"]),
            generator=gen,
        )

    def __repr__(self) -> str:
        return f"FieldContext(p={self.p}, k={self.k}, q={self.q})"

    # -- numpy views (built lazily, used by vectorized sweeps) ---------------

    @cached_property
    def np_exp(self) -> np.ndarray:
        return np.array(self.exp_table, dtype=np.int64)

    @cached_property
    def np_log(self) -> np.ndarray:
        arr = np.full(self.q, -1, dtype=np.int64)
        arr[self.np_exp] = np.arange(self.q - 1, dtype=np.int64)
        return arr

    @cached_property
    def np_add_table(self) -> np.ndarray:
        q = self.q
        if q > _NP_ADD_TABLE_CAP:
            raise CapacityError(f"q = {q} exceeds vectorized addition cap {_NP_ADD_TABLE_CAP}")
        p, k = self.p, self.k
        if p == 2:
            a = np.arange(q, dtype=np.int32)
            return a[:, None] ^ a[None, :]
        enc = np.arange(q, dtype=np.int64)
        digits = np.stack([(enc // p**i) % p for i in range(k)], axis=-1)
        summed = (digits[:, None, :] + digits[None, :, :]) % p
        weights = np.array([p**i for i in range(k)], dtype=np.int64)
        return (summed * weights).sum(axis=-1).astype(np.int32)

    def np_mul_arr(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        """Elementwise field product of two encoding arrays."""
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        out = np.zeros(np.broadcast(u, v).shape, dtype=np.int64)
        nz = (u != 0) & (v != 0)
        ub, vb = np.broadcast_to(u, out.shape), np.broadcast_to(v, out.shape)
        out[nz] = self.np_exp[(self.np_log[ub[nz]] + self.np_log[vb[nz]]) % (self.q - 1)]
        return out

    def np_mul_row(self, c: int) -> np.ndarray:
        """Vector of c * v over all encodings v."""
        q = self.q
        out = np.zeros(q, dtype=np.int64)
        if c:
            lc = self.log_table[c]
            out[1:] = self.np_exp[(lc + self.np_log[1:]) % (q - 1)]
        return out


def build_field(
    p: int,
    k: int,
    *,
    table_cap: int = DEFAULT_TABLE_CAP,
    modulus: tuple[int, ...] | None = None,
    generator: int | None = None,
) -> FieldContext:
    """Materialize GF(p^k); see FieldContext for tie-breaking rules."""
    return FieldContext(p, k, table_cap=table_cap, modulus=modulus, generator=generator)
