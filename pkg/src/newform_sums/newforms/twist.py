"""Heuristic twist-equivalence scan.

If f = chi (x) g for a quadratic character chi, then a_f(p)^2 = a_g(p)^2 at
every good prime.  For twist-inequivalent non-CM forms the coincidence is
rare, so the fraction of primes where the squares agree separates the cases
in practice.  This is a diagnostic, not a proof.
"""

from __future__ import annotations

from newform_sums.newforms.tables import PairContext
from newform_sums.report import DensityReport

LIKELY_TWIST_THRESHOLD = 0.95


def twist_equivalence_scan(ctx: PairContext, x: int) -> DensityReport:
    primes = ctx.good_primes(x)
    agree = sum(1 for p in primes if ctx.f[p] ** 2 == ctx.g[p] ** 2)
    params = {"x": x, "f": ctx.f.spec.label, "g": ctx.g.spec.label, "threshold": LIKELY_TWIST_THRESHOLD}
    if not primes:
        return DensityReport("twist-scan", params, {"primes": 0, "agree": 0}, status="insufficient-data")
    fraction = agree / len(primes)
    observed = {
        "primes": len(primes),
        "agree": agree,
        "fraction": fraction,
        "likely_twist_equivalent": fraction > LIKELY_TWIST_THRESHOLD,
    }
    return DensityReport("twist-scan", params, observed, status="report-only")
