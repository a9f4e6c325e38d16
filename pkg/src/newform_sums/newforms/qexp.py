"""Ramanujan tau from Delta = q * prod(1 - q^n)^24.

The product prod(1 - q^n) is Euler's pentagonal series, which is sparse
(about 2*sqrt(2n/3) nonzero terms up to q^n).  Raising it to the 24th power
is done by 24 successive dense-times-sparse multiplications.  Coefficients
grow past 64 bits, so the products are carried out in numpy int64 modulo
several 31-bit primes and recombined by CRT.
"""

from __future__ import annotations

import numpy as np

from newform_sums.errors import CapacityError

TAU_NMAX_CAP = 10**6

# Product is ~2**155, comfortably above 2 * max|tau(n)| for n <= 10**6 (< 2**125).
_CRT_PRIMES = (2147483647, 2147483629, 2147483587, 2147483579, 2147483563)


def pentagonal_terms(nmax: int) -> list[tuple[int, int]]:
    """(exponent, sign) pairs of prod_{n>=1}(1 - q^n) up to q^nmax."""
    terms = [(0, 1)]
    k = 1
    while True:
        sign = -1 if k % 2 else 1
        e1 = k * (3 * k - 1) // 2
        e2 = k * (3 * k + 1) // 2
        if e1 > nmax:
            break
        terms.append((e1, sign))
        if e2 <= nmax:
            terms.append((e2, sign))
        k += 1
    return sorted(terms)


def eta_product_power(power: int, nmax: int) -> list[int]:
    """Coefficients c_0..c_nmax of prod(1 - q^n)^power, exact."""
    terms = pentagonal_terms(nmax)
    mods = np.array(_CRT_PRIMES, dtype=np.int64)[:, None]
    series = np.zeros((len(_CRT_PRIMES), nmax + 1), dtype=np.int64)
    series[:, 0] = 1
    for _ in range(power):
        acc = np.zeros_like(series)
        for e, sign in terms:
            if sign > 0:
                acc[:, e:] += series[:, : nmax + 1 - e]
            else:
                acc[:, e:] -= series[:, : nmax + 1 - e]
        # |acc| <= len(terms) * 2**31 < 2**43 before reduction
        series = acc % mods
    return _crt_symmetric(series)


def _crt_symmetric(residues: np.ndarray) -> list[int]:
    moduli = [int(m) for m in _CRT_PRIMES]
    M = 1
    for m in moduli:
        M *= m
    weights = []
    for m in moduli:
        Mi = M // m
        weights.append(Mi * pow(Mi, -1, m))
    cols = [r.tolist() for r in residues]
    out = []
    half = M // 2
    for vals in zip(*cols):
        v = sum(w * int(r) for w, r in zip(weights, vals)) % M
        out.append(v - M if v > half else v)
    return out


def tau_values(nmax: int) -> list[int]:
    """[tau(0)=0, tau(1), ..., tau(nmax)]."""
    if nmax > TAU_NMAX_CAP:
        raise CapacityError(f"nmax={nmax} exceeds the overflow-safe cap {TAU_NMAX_CAP}")
    if nmax < 1:
        return [0]
    prod = eta_product_power(24, nmax - 1)
    return [0] + prod
