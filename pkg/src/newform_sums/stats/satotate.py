"""Joint Sato-Tate histograms and tail masses.

The semicircle density on [-2, 2] is (1/pi) sqrt(1 - t^2/4), which integrates
to 1; its distribution function is

    F(t) = 1/2 + t sqrt(4 - t^2) / (4 pi) + arcsin(t/2) / pi.

The joint measure for a twist-inequivalent pair is the product of two copies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import integrate

from newform_sums.errors import ParameterError
from newform_sums.newforms.tables import PairContext, good_sums
from newform_sums.report import DensityReport
from newform_sums.stats.counting import SIGMA_BAND, binomial_sigma, prime_count

SATO_TATE_SIGMA_BAND = 4.0


def st_density(t: float) -> float:
    if abs(t) >= 2:
        return 0.0
    return math.sqrt(1 - t * t / 4) / math.pi


def st_cdf(t: float) -> float:
    if t <= -2:
        return 0.0
    if t >= 2:
        return 1.0
    return 0.5 + t * math.sqrt(4 - t * t) / (4 * math.pi) + math.asin(t / 2) / math.pi


def uniform_cuts(n: int) -> list[float]:
    return [-2 + 4 * i / n for i in range(n + 1)]


def check_cuts(cuts: list[float]) -> None:
    if len(cuts) < 2 or cuts[0] != -2 or cuts[-1] != 2:
        raise ParameterError("cuts must start at -2 and end at 2")
    if any(b <= a for a, b in zip(cuts, cuts[1:])):
        raise ParameterError("cuts must be strictly increasing")


@dataclass
class SatoTateGrid:
    cuts: list[float]
    cell_mass: list[list[float]]
    cell_count: list[list[int]]

    @property
    def sample_size(self) -> int:
        return sum(map(sum, self.cell_count))


def grid_masses(cuts: list[float]) -> list[list[float]]:
    marginal = [st_cdf(b) - st_cdf(a) for a, b in zip(cuts, cuts[1:])]
    return [[mi * mj for mj in marginal] for mi in marginal]


def normalized_points(ctx: PairContext, x: int) -> np.ndarray:
    """(s, t) for each good prime p <= x, clipped to [-2, 2] against rounding."""
    k = ctx.weight
    rows = []
    for p, _ in good_sums(ctx, x):
        scale = p ** ((k - 1) / 2)
        rows.append((ctx.f[p] / scale, ctx.g[p] / scale))
    pts = np.array(rows, dtype=float).reshape(-1, 2)
    return np.clip(pts, -2.0, 2.0)


def _bin(values: np.ndarray, cuts: list[float]) -> np.ndarray:
    idx = np.searchsorted(np.asarray(cuts), values, side="right") - 1
    return np.clip(idx, 0, len(cuts) - 2)


def satotate_report(ctx: PairContext, x: int, cuts: list[float], sigmas: float = SATO_TATE_SIGMA_BAND):
    """Return (SatoTateGrid, DensityReport) comparing cell frequencies with the model."""
    check_cuts(cuts)
    pts = normalized_points(ctx, x)
    n = len(pts)
    m = len(cuts) - 1
    counts = np.zeros((m, m), dtype=np.int64)
    if n:
        np.add.at(counts, (_bin(pts[:, 0], cuts), _bin(pts[:, 1], cuts)), 1)
    masses = grid_masses(cuts)
    grid = SatoTateGrid(list(cuts), masses, counts.tolist())
    params = {"x": x, "cuts": list(cuts), "sigma": sigmas}
    if n == 0:
        return grid, DensityReport("satotate", params, {"sample": 0}, status="insufficient-data")
    rows = []
    ok = True
    for i in range(m):
        for j in range(m):
            freq = int(counts[i, j]) / n
            sig = binomial_sigma(masses[i][j], n)
            dev = (freq - masses[i][j]) / sig
            ok = ok and abs(dev) <= sigmas
            rows.append({"i": i, "j": j, "count": int(counts[i, j]), "observed": freq,
                         "predicted": masses[i][j], "deviation": dev})
    quadrants = []
    signs = ((pts[:, 0] < 0), (pts[:, 1] < 0))
    for qs in (True, False):
        for qt in (True, False):
            freq = float(np.count_nonzero((signs[0] == qs) & (signs[1] == qt))) / n
            dev = (freq - 0.25) / binomial_sigma(0.25, n)
            ok = ok and abs(dev) <= sigmas
            quadrants.append({"s_negative": qs, "t_negative": qt, "observed": freq, "deviation": dev})
    report = DensityReport(
        "satotate",
        params,
        observed={"rows": rows, "sample": n, "quadrants": quadrants},
        predicted={"total_mass": math.fsum(map(math.fsum, masses)), "quadrant_mass": 0.25},
        bands={"sigma": sigmas},
        status="pass" if ok else "fail",
    )
    return grid, report


def sum_exceeds_mass(c: float) -> float:
    """nu_ST({(s, t) : s + t > c}) as a 1-D integral against the closed-form CDF."""
    if c >= 4:
        return 0.0
    if c <= -4:
        return 1.0
    lo = max(-2.0, c - 2.0)
    # For s < c - 2 the conditional mass 1 - F(c - s) is 0.
    val, _ = integrate.quad(lambda s: st_density(s) * (1 - st_cdf(c - s)), lo, 2.0,
                            epsabs=1e-13, epsrel=1e-12, limit=200)
    return val


def tail_model_mass(M: float) -> float:
    """nu_ST(B_M) + nu_ST(B_M') with B_M = {s + t < -1/M}, B_M' = {s + t > 1/M}."""
    if M <= 0:
        raise ParameterError("M must be positive")
    return 2 * sum_exceeds_mass(1 / M)


def tail_density_report(ctx: PairContext, x: int, M: float) -> DensityReport:
    """|T_M(x)| / pi(x) with T_M(x) = {p <= x : |S_p| >= p^((k-1)/2) / M}."""
    if M <= 0.25:
        raise ParameterError(f"M must exceed 1/4, got {M}")
    k = ctx.weight
    m2 = Fraction(M) ** 2
    sums = good_sums(ctx, x)
    hits = sum(1 for p, s in sums if s * s * m2 >= p ** (k - 1))
    pix = prime_count(x)
    model = tail_model_mass(M)
    params = {"x": x, "M": M, "sign": ctx.sign}
    if not sums:
        return DensityReport("tails", params, {"count": 0}, status="insufficient-data")
    ratio_good = hits / len(sums)
    sig = binomial_sigma(model, len(sums))
    dev = (ratio_good - model) / sig if sig > 0 else 0.0
    return DensityReport(
        "tails",
        params,
        observed={"count": hits, "pi_x": pix, "good": len(sums), "ratio_pi": hits / pix,
                  "ratio_good": ratio_good, "deviation": dev},
        predicted={"mass": model, "method": "quadrature"},
        bands={"sigma": SIGMA_BAND},
        status="pass" if abs(dev) <= SIGMA_BAND else "fail",
    )
