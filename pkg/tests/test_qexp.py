import pytest

from newform_sums import arith
from newform_sums.errors import CapacityError
from newform_sums.newforms.qexp import TAU_NMAX_CAP, eta_product_power, pentagonal_terms, tau_values


def tau_oracle(nmax):
    """q * prod (1 - q^n)^24 by repeated multiplication with each (1 - q^n)."""
    series = [1] + [0] * (nmax - 1)
    for n in range(1, nmax):
        for _ in range(24):
            for i in range(nmax - 1, n - 1, -1):
                series[i] -= series[i - n]
    return [0] + series


def test_pentagonal_against_expansion():
    nmax = 60
    series = [1] + [0] * nmax
    for n in range(1, nmax + 1):
        for i in range(nmax, n - 1, -1):
            series[i] -= series[i - n]
    dense = [0] * (nmax + 1)
    for e, s in pentagonal_terms(nmax):
        dense[e] = s
    assert dense == series


def test_tau_small_values():
    assert tau_values(10)[1:] == [1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920]


def test_tau_matches_oracle():
    assert tau_values(120) == tau_oracle(120)


def test_tau_multiplicative_and_hecke():
    t = tau_values(1000)
    for p in arith.primes_up_to(31):
        assert t[p * p] == t[p] ** 2 - p**11
    for m, n in ((2, 3), (4, 25), (7, 9), (11, 13), (8, 125)):
        assert t[m * n] == t[m] * t[n]
    for p in arith.primes_up_to(1000):
        assert t[p] ** 2 <= 4 * p**11


def test_tau_large_index_exact():
    assert tau_values(961)[961] == -22616076492128607


def test_eta_power_one_is_pentagonal():
    dense = [0] * 41
    for e, s in pentagonal_terms(40):
        dense[e] = s
    assert eta_product_power(1, 40) == dense


def test_tau_cap():
    with pytest.raises(CapacityError):
        tau_values(TAU_NMAX_CAP + 1)
    assert tau_values(0) == [0]
