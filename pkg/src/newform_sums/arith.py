"""Primes, factorization and the small arithmetic functions used by the experiments.

Values handled here come from sums of Fourier coefficients, which reach about
4 * x**((k-1)/2).  For weight 12 and x = 10**6 that is ~10**34, so everything
is written for magnitudes below 2**127 using Python integers.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from newform_sums.errors import CapacityError, EmptyDomainError, UndefinedInputError

SEGMENT_SIZE = 1 << 20
TRIAL_DIVISION_LIMIT = 10**5
MAX_MAGNITUDE = 1 << 127
MAX_SIEVE_LIMIT = 1 << 32

# Deterministic Miller-Rabin for n < 3.3 * 10**24 (covers 2**64).
_MR_BASES_64 = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


@dataclass(frozen=True)
class PrimeTable:
    limit: int
    primes: np.ndarray

    def __len__(self) -> int:
        return len(self.primes)

    def __iter__(self):
        return (int(p) for p in self.primes)

    def __contains__(self, n: int) -> bool:
        if n > self.limit:
            raise ValueError(f"{n} is beyond the table limit {self.limit}")
        i = np.searchsorted(self.primes, n)
        return bool(i < len(self.primes) and self.primes[i] == n)

    def count_up_to(self, x: int) -> int:
        """pi(x) for x <= limit."""
        if x > self.limit:
            raise ValueError(f"{x} is beyond the table limit {self.limit}")
        return int(np.searchsorted(self.primes, x, side="right"))


def _simple_sieve(n: int) -> np.ndarray:
    flags = np.ones(n + 1, dtype=bool)
    flags[:2] = False
    for i in range(2, math.isqrt(n) + 1):
        if flags[i]:
            flags[i * i :: i] = False
    return np.flatnonzero(flags)


def primes_up_to(x: int) -> PrimeTable:
    """All primes <= x by a segmented sieve of Eratosthenes.

    >>> list(primes_up_to(10))
    [2, 3, 5, 7]
    """
    if x < 2:
        raise EmptyDomainError(f"no primes below {x}")
    if x > MAX_SIEVE_LIMIT:
        raise CapacityError(f"sieve limit {x} exceeds 2**32")
    base = _simple_sieve(math.isqrt(x))
    chunks = []
    for lo in range(0, x + 1, SEGMENT_SIZE):
        hi = min(lo + SEGMENT_SIZE, x + 1)
        seg = np.ones(hi - lo, dtype=bool)
        if lo == 0:
            seg[: min(2, hi)] = False
        for p in base:
            p = int(p)
            if p * p >= hi:
                break
            start = max(p * p, (lo + p - 1) // p * p)
            seg[start - lo :: p] = False
        chunks.append(np.flatnonzero(seg).astype(np.int64) + lo)
    return PrimeTable(limit=x, primes=np.concatenate(chunks))


def smallest_prime_factor_table(n: int) -> np.ndarray:
    """spf[m] for 0 <= m <= n (spf[0] = spf[1] = 0)."""
    spf = np.zeros(n + 1, dtype=np.int64)
    for p in _simple_sieve(math.isqrt(n)):
        p = int(p)
        block = spf[p * p :: p]
        block[block == 0] = p
    rest = np.flatnonzero(spf == 0)
    spf[rest] = rest
    spf[:2] = 0
    return spf


def jacobi(a: int, n: int) -> int:
    if n <= 0 or n % 2 == 0:
        raise ValueError("Jacobi symbol needs a positive odd modulus")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _strong_probable_prime(n: int, base: int) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    y = pow(base, d, n)
    if y == 1 or y == n - 1:
        return True
    for _ in range(s - 1):
        y = y * y % n
        if y == n - 1:
            return True
    return False


def _strong_lucas_probable_prime(n: int) -> bool:
    # Selfridge parameter choice; caller has excluded perfect squares.
    D = 5
    while True:
        j = jacobi(D, n)
        if j == -1:
            break
        if j == 0 and abs(D) != n:
            return False
        D = -D - 2 if D > 0 else -D + 2
    P, Q = 1, (1 - D) // 4
    d, s = n + 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1

    def half(v: int) -> int:
        if v % 2:
            v += n
        return (v // 2) % n

    U, V, Qk = 1, P, Q % n
    for bit in bin(d)[3:]:
        U = U * V % n
        V = (V * V - 2 * Qk) % n
        Qk = Qk * Qk % n
        if bit == "1":
            U, V = half(P * U + V), half(D * U + P * V)
            Qk = Qk * Q % n
    if U == 0 or V == 0:
        return True
    for _ in range(s - 1):
        V = (V * V - 2 * Qk) % n
        if V == 0:
            return True
        Qk = Qk * Qk % n
    return False


def is_prime(n: int) -> bool:
    """Deterministic below 2**64 (fixed Miller-Rabin bases); BPSW-style above.

    Above 2**64 the answer is a strong probable prime test to the first twelve
    prime bases followed by a strong Lucas test.  No counterexample to that
    combination is known, but it is not a proof.
    """
    if n < 2:
        return False
    for p in _MR_BASES_64:
        if n % p == 0:
            return n == p
    if n < 41 * 41:
        return True
    if not all(_strong_probable_prime(n, b) for b in _MR_BASES_64):
        return False
    if n < (1 << 64):
        return True
    r = math.isqrt(n)
    if r * r == n:
        return False
    return _strong_lucas_probable_prime(n)


@lru_cache(maxsize=1)
def _trial_primes() -> tuple[int, ...]:
    return tuple(primes_up_to(TRIAL_DIVISION_LIMIT))


def _brent_rho(n: int, rng: random.Random) -> int:
    """A nontrivial factor of the odd composite n (Pollard rho, Brent cycles)."""
    while True:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 128
        g = r = q = 1
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
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def _split(n: int, rng: random.Random, out: dict[int, int]) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    r = math.isqrt(n)
    if r * r == n:
        _split(r, rng, out)
        _split(r, rng, out)
        return
    d = _brent_rho(n, rng)
    _split(d, rng, out)
    _split(n // d, rng, out)


@dataclass(frozen=True)
class Factorization:
    value: int
    factors: tuple[tuple[int, int], ...]

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def recompose(self) -> int:
        """Product of the prime powers, carrying the sign of ``value``."""
        out = 1
        for p, e in self.factors:
            out *= p**e
        return -out if self.value < 0 else out


@lru_cache(maxsize=1 << 16)
def _factor_abs(m: int, seed: int) -> tuple[tuple[int, int], ...]:
    found: dict[int, int] = {}
    for p in _trial_primes():
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            found[p] = e
    if m > 1:
        if m <= TRIAL_DIVISION_LIMIT**2 or is_prime(m):
            found[m] = found.get(m, 0) + 1
        else:
            _split(m, random.Random(seed), found)
    return tuple(sorted(found.items()))


def factorize(n: int, seed: int = 0) -> Factorization:
    """Complete factorization of |n|, with signed ``value`` kept.

    >>> factorize(12).factors
    ((2, 2), (3, 1))
    >>> factorize(-1).factors
    ()
    """
    n = int(n)
    if n == 0:
        raise UndefinedInputError("0 has no factorization")
    if abs(n) >= MAX_MAGNITUDE:
        raise CapacityError(f"|n| >= 2**127: {n}")
    return Factorization(value=n, factors=_factor_abs(abs(n), seed))


def largest_prime_factor(n: int) -> int | None:
    """P(n); ``None`` for the units +-1."""
    f = factorize(n)
    return f.factors[-1][0] if f.factors else None


def omega(n: int) -> int:
    return len(factorize(n).factors)


def omega_up_to(n: int, u: float) -> int:
    """Number of distinct primes <= u dividing n."""
    return sum(1 for p, _ in factorize(n).factors if p <= u)


def valuation(n: int, ell: int) -> int:
    if n == 0:
        raise UndefinedInputError("valuation of 0 is infinite")
    n = abs(n)
    e = 0
    while n % ell == 0:
        n //= ell
        e += 1
    return e
