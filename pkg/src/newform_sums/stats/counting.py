"""Divisibility counts of S_p, vanishing counts, and Chebotarev frequency checks."""

from __future__ import annotations

import math

import numpy as np

from newform_sums import arith, galois
from newform_sums.errors import ParameterError
from newform_sums.newforms.tables import PairContext, good_sums
from newform_sums.report import DensityReport

SIGMA_BAND = 3.0


def prime_count(x: int) -> int:
    return arith.primes_up_to(x).count_up_to(x) if x >= 2 else 0


def _check_h(h: int) -> None:
    if h < 1:
        raise ParameterError(f"h must be >= 1, got {h}")


def pi_fg(ctx: PairContext, x: int, h: int) -> int:
    """#{p <= x : gcd(p, hN) = 1, h | S_p}."""
    _check_h(h)
    return sum(1 for p, s in good_sums(ctx, x) if h % p and s % h == 0)


def pi_fg_star(ctx: PairContext, x: int, h: int) -> int:
    """pi_fg restricted to S_p != 0."""
    _check_h(h)
    return sum(1 for p, s in good_sums(ctx, x) if h % p and s != 0 and s % h == 0)


def vanishing_count(ctx: PairContext, x: int) -> tuple[int, float]:
    """#{good p <= x : S_p = 0} and its ratio to pi(x)."""
    count = sum(1 for _, s in good_sums(ctx, x) if s == 0)
    pix = prime_count(x)
    return count, (count / pix if pix else 0.0)


def residue_counts(ctx: PairContext, x: int, ell: int) -> list[int]:
    """Counts of good p <= x by S_p mod ell."""
    counts = [0] * ell
    for _, s in good_sums(ctx, x):
        counts[s % ell] += 1
    return counts


def vanishing_report(ctx: PairContext, xs: list[int]) -> DensityReport:
    rows = []
    for x in sorted(xs):
        count, ratio = vanishing_count(ctx, x)
        rows.append({"x": x, "vanishing": count, "pi_x": prime_count(x), "ratio": ratio})
    ratios = [r["ratio"] for r in rows]
    return DensityReport(
        "vanishing",
        params={"xs": sorted(xs), "sign": ctx.sign},
        observed={"rows": rows, "decreasing": all(b < a for a, b in zip(ratios, ratios[1:]))},
        status="report-only",
    )


def binomial_sigma(prob: float, n: int) -> float:
    return math.sqrt(prob * (1 - prob) / n) if n else math.inf


def _exceptional(ctx: PairContext) -> set[int]:
    return set(ctx.f.spec.exceptional_primes) | set(ctx.g.spec.exceptional_primes)


def chebotarev_report(
    ctx: PairContext, x: int, moduli: list[int], override_exceptional: bool = False
) -> DensityReport:
    """Observed frequency of h | S_p against delta(h) from the full-image model.

    ``ratio_pi`` divides by pi(x); ``ratio_good`` divides by the number of
    primes p <= x with gcd(p, hN) = 1.  The pass/fail status uses the latter,
    with 3-sigma binomial bands.
    """
    N = ctx.level
    bad_moduli = _exceptional(ctx)
    sums = good_sums(ctx, x)
    pix = prime_count(x)
    rows = []
    ok = True
    for h in moduli:
        _check_h(h)
        if math.gcd(h, N) != 1:
            raise ParameterError(f"modulus {h} is not coprime to the level {N}")
        flagged = sorted(q for q, _ in arith.factorize(h).factors if q in bad_moduli) if h > 1 else []
        if flagged and not override_exceptional:
            raise ParameterError(f"modulus {h}: mod-{flagged} image is not full for this pair")
        counts = galois.galois_counts(h, ctx.weight)
        model = float(counts.delta)
        eligible = [s for p, s in sums if h % p]
        hits = sum(1 for s in eligible if s % h == 0)
        ratio_pi = hits / pix
        ratio_good = hits / len(eligible) if eligible else 0.0
        sig_pi = binomial_sigma(model, pix)
        sig_good = binomial_sigma(model, len(eligible))
        if sig_good > 0:
            dev_good = (ratio_good - model) / sig_good
            within = abs(dev_good) <= SIGMA_BAND
        else:
            dev_good = 0.0 if ratio_good == model else None
            within = ratio_good == model
        ok = ok and within
        rows.append(
            {
                "h": h,
                "count": hits,
                "eligible": len(eligible),
                "ratio_pi": ratio_pi,
                "ratio_good": ratio_good,
                "delta": model,
                "delta_num": counts.delta.numerator,
                "delta_den": counts.delta.denominator,
                "deviation_pi": (ratio_pi - model) / sig_pi if sig_pi > 0 else None,
                "deviation_good": dev_good,
                "ratio_over_delta": ratio_pi / model,
                "exceptional_override": bool(flagged),
                "within_band": within,
            }
        )
    return DensityReport(
        "chebotarev",
        params={"x": x, "moduli": list(moduli), "sign": ctx.sign, "k": ctx.weight, "N": N},
        observed={"rows": rows, "pi_x": pix},
        predicted={"delta": {str(r["h"]): r["delta"] for r in rows}, "method": "full-image model"},
        bands={"sigma": SIGMA_BAND},
        status="pass" if ok else "fail",
    )


def simulate_uniform_residues(n: int, ell: int, rng: np.random.Generator) -> float:
    """Deviation (in sigma) of a fair model: a_f, a_g uniform mod ell, target 1/ell."""
    af = rng.integers(0, ell, size=n)
    ag = rng.integers(0, ell, size=n)
    ratio = np.count_nonzero((af + ag) % ell == 0) / n
    return (ratio - 1 / ell) / binomial_sigma(1 / ell, n)
