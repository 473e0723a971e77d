"""Exact integer arithmetic: factorization and multiplicative functions.

Everything runs on plain Python integers, so values well past 64 bits are
fine.  The membership criteria consume the exact int/Fraction outputs of
this module; nothing here rounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

__all__ = [
    "CapacityError",
    "Factorization",
    "euler_phi",
    "factorize",
    "is_prime",
    "moebius",
    "omega_and_w",
    "primes_below",
    "squarefree_divisors",
    "theta",
]


class CapacityError(RuntimeError):
    """An input exceeds a configured size cap."""


# Deterministic Miller-Rabin witness set, valid for all n < 3.3e24, which is
# comfortably past the ~2^80 values this package factors.  Beyond that the
# test is a fixed-round probabilistic check with the same bases.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_TRIAL_LIMIT = 10**6
_PRIMES_CAP = 1 << 24


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = (d & -d).bit_length() - 1
    d >>= r
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_below(bound: int) -> list[int]:
    """All primes strictly below `bound`, ascending."""
    if bound > _PRIMES_CAP:
        raise CapacityError(f"prime sieve bound {bound} exceeds cap {_PRIMES_CAP}")
    if bound <= 2:
        return []
    sieve = bytearray([1]) * bound
    sieve[0] = sieve[1] = 0
    for i in range(2, isqrt(bound - 1) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i in range(bound) if sieve[i]]


@lru_cache(maxsize=1)
def _trial_primes() -> list[int]:
    return primes_below(_TRIAL_LIMIT)


def _brent(n: int) -> int:
    """Nontrivial factor of composite odd n via Brent's cycle method.

    Deterministic: the quadratic increment walks c = 1, 2, 3, ...
    """
    if n % 2 == 0:
        return 2
    c = 1
    while True:
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += m
            r <<= 1
        if g != n:
            return g
        g, y = 1, ys
        while g == 1:
            y = (y * y + c) % n
            g = gcd(abs(x - y), n)
        if g != n:
            return g
        c += 1


@dataclass(frozen=True)
class Factorization:
    """Exact prime factorization: primes strictly ascending, exponents >= 1."""

    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.value < 1:
            raise ValueError(f"cannot factor {self.value}: need a positive integer")
        prod, last = 1, 1
        for p, e in self.factors:
            if e < 1:
                raise ValueError(f"exponent {e} of prime {p} must be >= 1")
            if p <= last:
                raise ValueError("primes must be strictly ascending")
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")
            last = p
            prod *= p**e
        if prod != self.value:
            raise ValueError(f"factors reconstruct {prod}, not {self.value}")

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def radical(self) -> int:
        r = 1
        for p in self.primes:
            r *= p
        return r

    def to_json(self) -> dict:
        return {
            "value": str(self.value),
            "factors": [[str(p), str(e)] for p, e in self.factors],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Factorization":
        return cls(int(obj["value"]), tuple((int(p), int(e)) for p, e in obj["factors"]))


@lru_cache(maxsize=None)
def factorize(n: int) -> Factorization:
    """Factor n >= 1: trial division below 1e6, then Brent splitting.

    Deterministic for a given n; cofactors are certified prime by the
    fixed-base Miller-Rabin test.
    """
    if n < 1:
        raise ValueError(f"cannot factor {n}: need a positive integer")
    if n == 1:
        return Factorization(1, ())
    counts: dict[int, int] = {}
    m = n
    if not is_prime(m):
        for p in _trial_primes():
            if p * p > m:
                break
            if m % p:
                continue
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            counts[p] = e
            if m == 1 or is_prime(m):
                break
    if m > 1:
        if is_prime(m):
            counts[m] = counts.get(m, 0) + 1
        else:
            stack = [m]
            while stack:
                v = stack.pop()
                if is_prime(v):
                    counts[v] = counts.get(v, 0) + 1
                    continue
                d = _brent(v)
                stack.append(d)
                stack.append(v // d)
    return Factorization(n, tuple(sorted(counts.items())))


def euler_phi(f: Factorization) -> int:
    phi = 1
    for p, e in f.factors:
        phi *= (p - 1) * p ** (e - 1)
    return phi


def moebius(f: Factorization) -> int:
    if any(e >= 2 for _, e in f.factors):
        return 0
    return -1 if len(f.factors) % 2 else 1


def omega_and_w(f: Factorization) -> tuple[int, int]:
    """(number of distinct primes, number of square-free divisors)."""
    omega = len(f.factors)
    return omega, 1 << omega


def theta(f: Factorization) -> Fraction:
    """phi(s)/s in lowest terms."""
    return Fraction(euler_phi(f), f.value)


def squarefree_divisors(f: Factorization) -> list[tuple[int, int]]:
    """All square-free divisors with their Moebius signs, ascending."""
    divs = [(1, 1)]
    for p in f.primes:
        divs += [(d * p, -s) for d, s in divs]
    divs.sort()
    return divs
