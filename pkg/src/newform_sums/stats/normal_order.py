"""Second moments of omega(S_p) about log log, normalized by pi(x) log log."""

from __future__ import annotations

import math
from fractions import Fraction

from newform_sums import arith
from newform_sums.errors import ParameterError
from newform_sums.newforms.tables import PairContext, good_sums
from newform_sums.report import DensityReport
from newform_sums.stats.counting import prime_count

MIN_X = 16
ETA_UPPER = Fraction(1, 14)


def _nonzero_sums(ctx: PairContext, x: int) -> list[tuple[int, int]]:
    return [(p, s) for p, s in good_sums(ctx, x) if s != 0]


def normal_order_moment(ctx: PairContext, x: int, eta: float | None = None, u: float | None = None) -> DensityReport:
    """sum over S_p != 0 of (omega_u(S_p) - log log u)^2 / (pi(x) log log u).

    Normally u = x^eta with 0 < eta < 1/14.  A fixed ``u`` may be passed
    instead as a diagnostic; the report then records u_policy "fixed".
    When log log u <= 0 (u <= e) the normalization is not positive and the
    report is insufficient-data; with eta = 1/15 that covers every x below
    e^15 ~ 3.3e6.
    """
    if u is None:
        if eta is None or not 0 < float(eta) < float(ETA_UPPER):
            raise ParameterError(f"eta must satisfy 0 < eta < 1/14, got {eta}")
        u = x**eta
        policy = "eta"
    else:
        if u < 2:
            raise ParameterError(f"u must be >= 2, got {u}")
        policy = "fixed"
    params = {"x": x, "eta": eta, "u": u, "u_policy": policy, "sign": ctx.sign}
    if x < MIN_X or math.log(u) <= 1:
        return DensityReport("normal-order-u", params, {"reason": "log log u <= 0"}, status="insufficient-data")
    llu = math.log(math.log(u))
    sums = _nonzero_sums(ctx, x)
    if not sums:
        return DensityReport("normal-order-u", params, {"qualifying": 0}, status="insufficient-data")
    pix = prime_count(x)
    total = math.fsum((arith.omega_up_to(s, u) - llu) ** 2 for _, s in sums)
    return DensityReport(
        "normal-order-u",
        params,
        observed={"moment": total / (pix * llu), "qualifying": len(sums), "pi_x": pix, "loglog_u": llu},
        predicted={"bound": "O(1)"},
        status="report-only",
    )


def normal_order_moment_logp(ctx: PairContext, x: int) -> DensityReport:
    """sum over S_p != 0 of (omega(S_p) - log log p)^2 / (pi(x) log log x)."""
    params = {"x": x, "sign": ctx.sign}
    if x < MIN_X:
        return DensityReport("normal-order", params, {"reason": "x < 16"}, status="insufficient-data")
    sums = _nonzero_sums(ctx, x)
    if not sums:
        return DensityReport("normal-order", params, {"qualifying": 0}, status="insufficient-data")
    pix = prime_count(x)
    llx = math.log(math.log(x))
    total = math.fsum((arith.omega(s) - math.log(math.log(p))) ** 2 for p, s in sums)
    mean_omega = math.fsum(arith.omega(s) for _, s in sums) / len(sums)
    return DensityReport(
        "normal-order",
        params,
        observed={"moment": total / (pix * llx), "qualifying": len(sums), "pi_x": pix,
                  "loglog_x": llx, "mean_omega": mean_omega},
        predicted={"bound": "O(1)"},
        status="report-only",
    )
