"""Largest-prime-factor thresholds over primes and over integers.

The threshold (log n)^(1/14) (log log n)^(3/7 - eps) is real only when
log log n > 0, i.e. n >= 3.  Smaller n (and the units +-1, which have no
prime factor) never satisfy it.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from newform_sums import arith
from newform_sums.errors import ParameterError
from newform_sums.newforms.tables import PairContext, dirichlet_convolution, extend_to_all_n, good_sums
from newform_sums.report import DensityReport
from newform_sums.stats.counting import prime_count

MIN_X = 16


def lpf_threshold(n: float, eps: float) -> float | None:
    if n < 3:
        return None
    ln = math.log(n)
    return ln ** (1 / 14) * math.log(ln) ** (3 / 7 - eps)


def passes_lpf(value: int, n: int, eps: float) -> bool:
    """value != 0 and P(value) > threshold(n)."""
    bound = lpf_threshold(n, eps)
    if value == 0 or bound is None:
        return False
    big = arith.largest_prime_factor(value)
    return big is not None and big > bound


def _check_eps(eps: float) -> None:
    if not eps > 0:
        raise ParameterError(f"epsilon must be positive, got {eps}")


def lpf_threshold_density(ctx: PairContext, x: int, eps: float) -> DensityReport:
    """Fraction of good primes 3 <= p <= x with S_p != 0 and P(S_p) above the threshold."""
    _check_eps(eps)
    params = {"x": x, "epsilon": eps, "sign": ctx.sign}
    sums = [(p, s) for p, s in good_sums(ctx, x) if p >= 3]
    if x < MIN_X or not sums:
        return DensityReport("lpf", params, {"primes": len(sums)}, status="insufficient-data")
    passing = sum(1 for p, s in sums if passes_lpf(s, p, eps))
    zeros = sum(1 for _, s in sums if s == 0)
    units = sum(1 for _, s in sums if abs(s) == 1)
    fraction = passing / len(sums)
    return DensityReport(
        "lpf",
        params,
        observed={"primes": len(sums), "passing": passing, "fraction": fraction,
                  "exceptional_fraction": 1 - fraction, "zero": zeros, "units": units,
                  "threshold_at_x": lpf_threshold(x, eps)},
        predicted={"fraction_limit": 1.0},
        status="report-only",
    )


def grh_rhs_a(p: float, eps: float) -> float:
    """log p / exp(3 (log log p)^(1/2 + eps))."""
    return math.log(p) / math.exp(3 * math.log(math.log(p)) ** (0.5 + eps))


def grh_rhs_b(p: float, eps: float) -> float:
    return math.log(math.log(p)) ** (0.5 + eps) * grh_rhs_a(p, eps)


def grh_growth_report(ctx: PairContext, x: int, eps: float) -> DensityReport:
    """Fractions of primes meeting the two GRH-conditional inequalities (never pass/fail)."""
    _check_eps(eps)
    k = ctx.weight
    params = {"x": x, "epsilon": eps, "sign": ctx.sign}
    sums = [(p, s) for p, s in good_sums(ctx, x) if p >= 3 and s != 0]
    if x < MIN_X or not sums:
        return DensityReport("grh", params, {"primes": len(sums)}, status="report-only")
    ok_a = ok_b = 0
    for p, s in sums:
        big = arith.largest_prime_factor(s)
        if big is not None and math.log(big) >= grh_rhs_a(p, eps):
            ok_a += 1
        if math.log(abs(s)) >= grh_rhs_b(p, eps):
            ok_b += 1
    # Largest prime where even the maximal |S_p| = 4 p^((k-1)/2) cannot meet (a).
    crossover = None
    for p in arith.primes_up_to(x):
        if p >= 3 and grh_rhs_a(p, eps) > math.log(4) + (k - 1) / 2 * math.log(p):
            crossover = p
    return DensityReport(
        "grh",
        params,
        observed={"primes": len(sums), "fraction_a": ok_a / len(sums), "fraction_b": ok_b / len(sums),
                  "crossover_p": crossover},
        predicted={"note": "GRH-conditional asymptotics; not tested"},
        status="report-only",
    )


def _all_n(ctx_table, X):
    if ctx_table.mode == "all" and ctx_table.nmax >= X:
        return ctx_table
    return extend_to_all_n(ctx_table, X)


def convolution_values(ctx: PairContext, X: int) -> list[int]:
    ctx.require(X)
    return dirichlet_convolution(_all_n(ctx.f, X), _all_n(ctx.g, X), X)


def convolution_density(ctx: PairContext, X: int, eps: float, checkpoints: list[int] | None = None) -> DensityReport:
    """Fraction of n <= X with (a_f * a_g)(n) = 0 or P((a_f * a_g)(n)) > threshold(n)."""
    _check_eps(eps)
    params = {"X": X, "epsilon": eps}
    if X < MIN_X:
        return DensityReport("convolution", params, {"X": X}, status="insufficient-data")
    conv = convolution_values(ctx, X)
    marks = sorted({c for c in (checkpoints or []) if c <= X} | {X})
    rows = []
    members = zeros = passing = units = 0
    for n in range(1, X + 1):
        c = conv[n]
        if c == 0:
            zeros += 1
            members += 1
        elif abs(c) == 1:
            units += 1
        elif passes_lpf(c, n, eps):
            passing += 1
            members += 1
        if n in marks:
            rows.append({"X": n, "fraction": members / n, "zero_fraction": zeros / n,
                         "passing_fraction": passing / n, "unit_fraction": units / n})
    return DensityReport(
        "convolution",
        params,
        observed={"rows": rows, "fraction": members / X, "zero_fraction": zeros / X,
                  "passing_fraction": passing / X, "unit_values": units},
        predicted={"density_limit": 1.0},
        status="report-only",
    )


def default_prime_set(ctx: PairContext, X: int, eps: float) -> Callable[[int], bool]:
    """Good primes p with S_p != 0 and P(S_p) above the threshold at p."""
    good = {p for p, s in good_sums(ctx, X) if passes_lpf(s, p, eps)}
    return good.__contains__


def sieve_set_density(
    X: int,
    eps: float,
    prime_set: Callable[[int], bool],
    checkpoints: list[int] | None = None,
) -> DensityReport:
    """Densities of Q and T up to X.

    Q: n with a prime p in the set, p | n, p > n^(1 / (log log n)^eps).
    T: as Q with p || n.  T is a subset of Q.  n < 3 belongs to neither.
    """
    _check_eps(eps)
    params = {"X": X, "epsilon": eps}
    if X < MIN_X:
        return DensityReport("sieve-sets", params, {"X": X}, status="insufficient-data")
    spf = arith.smallest_prime_factor_table(X).tolist()
    in_set = np.zeros(X + 1, dtype=bool)
    for p in arith.primes_up_to(X):
        in_set[p] = prime_set(p)
    in_set = in_set.tolist()
    marks = sorted({c for c in (checkpoints or []) if c <= X} | {X})
    rows = []
    q_count = t_count = 0
    subset_ok = True
    for n in range(3, X + 1):
        # n^(1/L^eps) with L = log log n; huge for small n and large eps.
        log_bound = math.log(n) / math.log(math.log(n)) ** eps
        bound = math.exp(log_bound) if log_bound < 700 else math.inf
        m = n
        in_q = in_t = False
        while m > 1:
            p = spf[m]
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            if in_set[p] and p > bound:
                in_q = True
                in_t = in_t or e == 1
        q_count += in_q
        t_count += in_t
        subset_ok = subset_ok and (in_q or not in_t)
        if n in marks:
            rows.append({"X": n, "Q_density": q_count / n, "T_density": t_count / n})
    for c in marks:
        if c < 3:
            rows.insert(0, {"X": c, "Q_density": 0.0, "T_density": 0.0})
    q_series = [r["Q_density"] for r in rows]
    return DensityReport(
        "sieve-sets",
        params,
        observed={"rows": rows, "Q_density": q_count / X, "T_density": t_count / X,
                  "T_subset_of_Q": subset_ok,
                  "Q_increasing": all(b >= a for a, b in zip(q_series, q_series[1:]))},
        predicted={"density_limit": 1.0},
        status="report-only",
    )
