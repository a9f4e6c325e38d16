"""Traces of Frobenius a_p = p + 1 - #E(F_p) for rational elliptic curves.

Two backends:

* ``count_points_naive`` -- exhaustive count on the long Weierstrass model,
  valid at every prime (good or bad).
* ``count_points_bsgs`` -- baby-step/giant-step order finding on a short model,
  using random points on both the curve and its quadratic twist until exactly
  one group order is left in the Hasse interval.

``ap_from_curve`` picks naive below ``NAIVE_CUTOFF`` and BSGS above it.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

import numpy as np

from newform_sums.arith import factorize
from newform_sums.errors import BadReductionError

NAIVE_CUTOFF = 10**4
BSGS_MAX_ROUNDS = 24


@dataclass(frozen=True)
class Weierstrass:
    """Long model y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6."""

    a1: int
    a2: int
    a3: int
    a4: int
    a6: int

    @classmethod
    def from_list(cls, ainvs) -> "Weierstrass":
        if len(ainvs) != 5:
            raise ValueError("need exactly five a-invariants")
        return cls(*(int(a) for a in ainvs))

    def ainvs(self) -> list[int]:
        return [self.a1, self.a2, self.a3, self.a4, self.a6]

    @property
    def b_invariants(self) -> tuple[int, int, int, int]:
        a1, a2, a3, a4, a6 = self.ainvs()
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    @property
    def discriminant(self) -> int:
        b2, b4, b6, b8 = self.b_invariants
        return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    @property
    def c_invariants(self) -> tuple[int, int]:
        b2, b4, b6, _ = self.b_invariants
        return b2 * b2 - 24 * b4, -(b2**3) + 36 * b2 * b4 - 216 * b6

    def short_model(self) -> tuple[int, int]:
        """(A, B) with y^2 = x^3 + A x + B isomorphic over F_p for p > 3."""
        c4, c6 = self.c_invariants
        return -27 * c4, -54 * c6


def count_points_naive(curve: Weierstrass, p: int) -> int:
    """#E(F_p) including the point at infinity, by exhaustive enumeration.

    At bad primes this counts the points of the singular reduction, which
    gives the usual a_p in {-1, 0, 1}.
    """
    a1, a2, a3, a4, a6 = (a % p for a in curve.ainvs())
    if p == 2:
        affine = sum(
            1
            for x in range(2)
            for y in range(2)
            if (y * y + a1 * x * y + a3 * y - x**3 - a2 * x * x - a4 * x - a6) % 2 == 0
        )
        return affine + 1
    # Complete the square in y: solutions per x are 1 + (disc / p).
    x = np.arange(p, dtype=np.int64)
    lin = (a1 * x + a3) % p
    cub = (((x * x % p) * x) % p + a2 * (x * x % p) + a4 * x + a6) % p
    disc = (lin * lin + 4 * cub) % p
    squares = np.zeros(p, dtype=np.int64)
    squares[(x * x) % p] = 1
    chi = np.where(disc == 0, 0, 2 * squares[disc] - 1)
    return int(p + np.sum(chi)) + 1


# -- short-model group law over F_p; None is the point at infinity ----------


def _add(P, Q, A, p):
    if P is None:
        return Q
    if Q is None:
        return P
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if (y1 + y2) % p == 0:
            return None
        lam = (3 * x1 * x1 + A) * pow(2 * y1, -1, p) % p
    else:
        lam = (y2 - y1) * pow(x2 - x1, -1, p) % p
    x3 = (lam * lam - x1 - x2) % p
    return x3, (lam * (x1 - x3) - y1) % p


def _mul(n, P, A, p):
    if n < 0:
        n, P = -n, (P[0], -P[1] % p)
    R = None
    while n:
        if n & 1:
            R = _add(R, P, A, p)
        n >>= 1
        if n:
            P = _add(P, P, A, p)
    return R


def _order_multiple_in_range(P, A, p, lo, hi):
    """Some m in [lo, hi] with mP = O, or None."""
    width = hi - lo
    s = max(1, math.isqrt(width // 2) + 1)
    baby = {}
    R = None
    for j in range(s + 1):
        if R is None:
            baby.setdefault(None, j)
        else:
            baby.setdefault(R[0], j)
        R = _add(R, P, A, p)
    step = _mul(2 * s + 1, P, A, p)
    centre = lo + s
    G = _mul(centre, P, A, p)
    while centre - s <= hi:
        key = None if G is None else G[0]
        if key in baby:
            j = baby[key]
            for m in (centre - j, centre + j):
                if lo <= m <= hi and _mul(m, P, A, p) is None:
                    return m
        centre += 2 * s + 1
        G = _add(G, step, A, p)
    return None


def _exact_order(P, m, A, p):
    order = m
    for q, _ in factorize(m).factors:
        while order % q == 0 and _mul(order // q, P, A, p) is None:
            order //= q
    return order


def count_points_bsgs(curve: Weierstrass, p: int, seed: int = 0) -> int:
    """#E(F_p) by BSGS with twist disambiguation (p > 3, good reduction).

    A random x gives r = x^3 + Ax + B; the point (x r, r^2) lies on
    y^2 = x^3 + A r^2 x + B r^3, which is E when r is a square and the
    quadratic twist E' otherwise.  Orders on E divide N, orders on E' divide
    2p + 2 - N.  Rounds continue until one N in the Hasse interval survives;
    if that does not happen, fall back to exhaustive counting.
    """
    if p <= 3:
        return count_points_naive(curve, p)
    A, B = (c % p for c in curve.short_model())
    if (4 * A**3 + 27 * B * B) % p == 0:
        raise BadReductionError(p)
    bound = math.isqrt(4 * p)
    lo, hi = p + 1 - bound, p + 1 + bound
    rng = random.Random(seed * 1_000_003 + p)
    mod_e = mod_t = 1
    for _ in range(BSGS_MAX_ROUNDS):
        x = rng.randrange(p)
        r = (x * x * x + A * x + B) % p
        if r == 0:
            continue
        on_twist = pow(r, (p - 1) // 2, p) != 1
        Ar = A * r * r % p
        P = (x * r % p, r * r % p)
        # The relevant group order lies in the same Hasse interval either way.
        m = _order_multiple_in_range(P, Ar, p, lo, hi)
        if m is None:
            break
        order = _exact_order(P, m, Ar, p)
        if on_twist:
            mod_t = math.lcm(mod_t, order)
        else:
            mod_e = math.lcm(mod_e, order)
        candidates = [
            n
            for n in range(lo + (-lo) % mod_e, hi + 1, mod_e)
            if (2 * p + 2 - n) % mod_t == 0
        ]
        if len(candidates) == 1:
            return candidates[0]
        if not candidates:
            break
    return count_points_naive(curve, p)


def ap_from_curve(curve: Weierstrass, p: int, backend: str = "auto", seed: int = 0) -> int:
    """a_p = p + 1 - #E(F_p) at a prime of good reduction."""
    if curve.discriminant % p == 0:
        raise BadReductionError(p)
    if backend == "auto":
        backend = "naive" if p < NAIVE_CUTOFF or p <= 3 else "bsgs"
    if backend == "naive":
        n = count_points_naive(curve, p)
    elif backend == "bsgs":
        n = count_points_bsgs(curve, p, seed)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    return p + 1 - n


def ap_any_prime(curve: Weierstrass, p: int, seed: int = 0) -> int:
    """a_p at good or bad primes; bad primes use the singular-cubic count."""
    if curve.discriminant % p == 0:
        return p + 1 - count_points_naive(curve, p)
    return ap_from_curve(curve, p, seed=seed)
