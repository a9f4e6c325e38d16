"""Exact sizes of the mod-h image model and its trace-sum-zero subset.

Model: A_h = {(A, B) in GL2(Z/h)^2 : det A = det B in ((Z/h)^x)^(k-1)} and
C_h = {(A, B) in A_h : tr A + tr B = 0}.  delta(h) = |C_h| / |A_h|.

Three routes, which must agree wherever they overlap:

* enumeration: histogram every matrix in GL2(Z/h) by (det, trace), then
  count pairs fiberwise.  Exhaustive, used for h <= 16.
* closed form (odd prime ell): the number of matrices in GL2(F_ell) with
  trace t and determinant d is ell^2 + ell * (t^2 - 4d | ell).
* CRT: for squarefree h, sizes multiply over the prime factors.

All arithmetic is in Python integers and Fractions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from newform_sums import arith
from newform_sums.errors import CapacityError, NonUnitError, UnsupportedModulusError
from newform_sums.report import DensityReport

ENUMERATION_MAX_H = 16
PRIME_POWERS_BY_ENUMERATION = (4, 8, 9)
CSV_HEADER = "h,k,sizeA,sizeC,delta_num,delta_den,method"


@dataclass(frozen=True)
class GaloisCounts:
    h: int
    k: int
    sizeA: int
    sizeC: int
    method: str

    def __post_init__(self):
        if not 0 < self.sizeC <= self.sizeA:
            raise ValueError(f"inconsistent counts {self.sizeC}/{self.sizeA}")

    @property
    def delta(self) -> Fraction:
        return Fraction(self.sizeC, self.sizeA)

    def csv_row(self) -> str:
        d = self.delta
        return f"{self.h},{self.k},{self.sizeA},{self.sizeC},{d.numerator},{d.denominator},{self.method}"


def admissible_determinants(h: int, k: int) -> list[int]:
    """The subgroup ((Z/h)^x)^(k-1) as sorted residues."""
    return sorted({pow(u, k - 1, h) for u in range(1, h) if math.gcd(u, h) == 1})


def _legendre_table(ell: int) -> np.ndarray:
    chi = -np.ones(ell, dtype=np.int64)
    r = np.arange(1, ell, dtype=np.int64)
    chi[(r * r) % ell] = 1
    chi[0] = 0
    return chi


def _trace_det_histogram(h: int) -> np.ndarray:
    """hist[d, t] = #{M in GL2(Z/h) : det M = d, tr M = t}."""
    r = np.arange(h, dtype=np.int64)
    a, b, c, d = np.meshgrid(r, r, r, r, indexing="ij", sparse=True)
    det = (a * d - b * c) % h
    tr = np.broadcast_to((a + d) % h, det.shape)
    det, tr = det.ravel(), tr.ravel()
    unit = np.gcd(det, h) == 1
    idx = det[unit] * h + tr[unit]
    return np.bincount(idx, minlength=h * h).reshape(h, h)


def count_matrices_trace_det(ell: int, t: int, d: int) -> int:
    """#{M in GL2(F_ell) : tr M = t, det M = d}."""
    if d % ell == 0:
        raise NonUnitError(f"determinant {d} is not a unit mod {ell}")
    if ell == 2:
        return int(_trace_det_histogram(2)[d % 2, t % 2])
    disc = (t * t - 4 * d) % ell
    chi = 0 if disc == 0 else (1 if pow(disc, (ell - 1) // 2, ell) == 1 else -1)
    return ell * ell + ell * chi


def enumerate_counts(h: int, k: int) -> GaloisCounts:
    """Exhaustive count over all matrices of GL2(Z/h), 2 <= h <= 16."""
    if not 2 <= h <= ENUMERATION_MAX_H:
        raise CapacityError(f"enumeration supports 2 <= h <= {ENUMERATION_MAX_H}, got {h}")
    hist = _trace_det_histogram(h)
    neg = (-np.arange(h)) % h
    size_a = size_c = 0
    for d in admissible_determinants(h, k):
        row = [int(v) for v in hist[d]]
        size_a += sum(row) ** 2
        size_c += sum(row[t] * row[int(neg[t])] for t in range(h))
    return GaloisCounts(h, k, size_a, size_c, "enumeration")


def counts_closed_form(ell: int, k: int) -> GaloisCounts:
    """Counts for an odd prime ell from the trace-determinant fiber sizes.

    N(t, d) depends on d only through whether d is a square, so the sum over
    d in D reduces to two fiber profiles weighted by class sizes in D.
    """
    if ell == 2:
        raise UnsupportedModulusError("ell = 2 has no closed form here; use enumerate_counts")
    if not arith.is_prime(ell):
        raise UnsupportedModulusError(f"{ell} is not prime")
    dets = admissible_determinants(ell, k)
    chi = _legendre_table(ell)
    t = np.arange(ell, dtype=np.int64)
    group = ell**3 - ell
    size_c = 0
    for d_class in (1, -1):
        members = [d for d in dets if chi[d] == d_class]
        if not members:
            continue
        disc = (t * t - 4 * members[0]) % ell
        counts = np.bincount(chi[disc] + 1, minlength=3)  # chi = -1, 0, 1
        n_minus, n_zero, n_plus = (int(c) for c in counts)
        # N(-t, d) = N(t, d), so the inner sum is a sum of squares.
        per_d = n_zero * ell**4 + n_plus * (ell * ell + ell) ** 2 + n_minus * (ell * ell - ell) ** 2
        size_c += len(members) * per_d
    return GaloisCounts(ell, k, len(dets) * group * group, size_c, "closed-form")


def prime_counts(ell: int, k: int) -> GaloisCounts:
    return enumerate_counts(2, k) if ell == 2 else counts_closed_form(ell, k)


def delta_squarefree(h: int, k: int) -> GaloisCounts:
    """CRT product of the prime-level counts; h = 1 gives delta = 1."""
    if h == 1:
        return GaloisCounts(1, k, 1, 1, "crt")
    f = arith.factorize(h)
    if any(e > 1 for _, e in f.factors):
        raise UnsupportedModulusError(f"{h} is not squarefree")
    size_a = size_c = 1
    for ell, _ in f.factors:
        c = prime_counts(ell, k)
        size_a *= c.sizeA
        size_c *= c.sizeC
    return GaloisCounts(h, k, size_a, size_c, "crt")


def galois_counts(h: int, k: int) -> GaloisCounts:
    """Best available route for h: CRT for squarefree h, enumeration for 4, 8, 9."""
    if h in PRIME_POWERS_BY_ENUMERATION:
        return enumerate_counts(h, k)
    return delta_squarefree(h, k)


def delta(h: int, k: int) -> Fraction:
    return galois_counts(h, k).delta


def supported_moduli(hmax: int) -> list[int]:
    out = []
    for h in range(2, hmax + 1):
        if h in PRIME_POWERS_BY_ENUMERATION or all(e == 1 for _, e in arith.factorize(h).factors):
            out.append(h)
    return out


def counts_to_csv(rows: list[GaloisCounts]) -> str:
    return "\n".join([CSV_HEADER] + [r.csv_row() for r in rows]) + "\n"


def asymptotic_report(ell_max: int, k: int) -> DensityReport:
    """Convergence diagnostics ell * delta(ell) -> 1 and |C_ell| gcd(ell-1, k-1) / ell^6 -> 1."""
    if ell_max > 10**4:
        raise CapacityError("ell_max is capped at 10**4")
    rows = []
    fitted_c = 0.0
    for ell in arith.primes_up_to(ell_max):
        c = prime_counts(ell, k)
        scaled = ell * c.delta
        size_ratio = Fraction(c.sizeC * math.gcd(ell - 1, k - 1), ell**6)
        fitted_c = max(fitted_c, float(ell * abs(scaled - 1)))
        rows.append(
            {
                "ell": ell,
                "delta_num": c.delta.numerator,
                "delta_den": c.delta.denominator,
                "ell_delta": float(scaled),
                "size_ratio": float(size_ratio),
            }
        )
    ratios = [r["size_ratio"] for r in rows if r["ell"] >= 11]
    gaps = [abs(r - 1) for r in ratios]
    trend = all(b <= a for a, b in zip(gaps, gaps[1:]))
    return DensityReport(
        "delta-asymptotics",
        params={"ell_max": ell_max, "k": k},
        observed={"rows": rows, "fitted_C": fitted_c, "size_ratio_monotone_from_11": trend},
        predicted={"ell_delta_limit": 1.0, "size_ratio_limit": 1.0},
        status="report-only",
    )
