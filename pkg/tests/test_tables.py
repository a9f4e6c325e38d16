import math
import os
import stat

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from newform_sums.errors import (
    BadReductionError,
    CoefficientOverflowError,
    CoefficientParseError,
    CoverageError,
    IncompleteInputError,
)
from newform_sums.newforms import (
    FIXTURES,
    CoefficientTable,
    PairContext,
    build_table,
    delta_tau_table,
    dirichlet_convolution,
    extend_to_all_n,
    format_coefficients,
    load_coefficients,
    parse_coefficients,
    sum_coefficient,
    write_coefficients,
)
from newform_sums.newforms.tables import restrict_to_primes, within_deligne

# Published q-expansion of the level-37 rank-one newform, n = 1..20.
Q37 = [1, -2, -3, 2, -2, 6, -1, 0, 6, 4, -5, -6, -2, 2, 6, -4, 0, -12, 0, -4]


@pytest.fixture(scope="module")
def t37():
    return build_table(FIXTURES["37a1"], 2000)


@pytest.fixture(scope="module")
def t389():
    return build_table(FIXTURES["389a1"], 2000)


def test_extend_matches_published_expansion(t37):
    full = extend_to_all_n(t37, 20)
    assert [full[n] for n in range(1, 21)] == Q37


def test_extend_degenerate_at_level(t37):
    full = extend_to_all_n(t37, 37**2)
    assert full[37] == -1 and full[37**2] == 1
    assert full[2 * 37] == full[2] * full[37]


def test_extend_recovers_tau():
    tau = delta_tau_table(3000)
    assert extend_to_all_n(restrict_to_primes(tau)) == tau


def test_extend_missing_prime(t37):
    entries = dict(t37.entries)
    del entries[7]
    with pytest.raises(IncompleteInputError):
        extend_to_all_n(CoefficientTable(t37.spec, 2000, "primes", entries), 100)


def test_convolution_against_divisor_sum(t37, t389):
    f, g = extend_to_all_n(t37, 600), extend_to_all_n(t389, 600)
    conv = dirichlet_convolution(f, g, 600)
    assert conv[0] == 0 and conv[1] == 1
    for n in range(1, 601):
        assert conv[n] == sum(f[d] * g[n // d] for d in range(1, n + 1) if n % d == 0)


def test_convolution_requires_all_mode(t37, t389):
    with pytest.raises(IncompleteInputError):
        dirichlet_convolution(t37, t389, 10)
    with pytest.raises(CoverageError):
        dirichlet_convolution(extend_to_all_n(t37, 50), extend_to_all_n(t389, 50), 60)


def test_convolution_overflow():
    spec = FIXTURES["delta"]
    big = CoefficientTable(spec, 2, "all", {1: 1, 2: 1 << 126})
    with pytest.raises(CoefficientOverflowError):
        dirichlet_convolution(big, big, 2)


@given(st.integers(1, 2000), st.integers(1, 2000))
@settings(max_examples=200, deadline=None)
def test_multiplicativity_property(m, n):
    if math.gcd(m, n) != 1 or m * n > 4000:
        return
    full = _extended_37()
    assert full[m * n] == full[m] * full[n]


_CACHE = {}


def _extended_37():
    if "t" not in _CACHE:
        _CACHE["t"] = extend_to_all_n(build_table(FIXTURES["37a1"], 4000))
    return _CACHE["t"]


def test_deligne_exact():
    assert within_deligne(2, 2, 2)  # 4 <= 8
    assert not within_deligne(3, 2, 2)  # 9 > 8
    assert within_deligne(-24, 2, 12)


def test_build_is_worker_independent():
    one = build_table(FIXTURES["389a1"], 30_000, workers=1)
    many = build_table(FIXTURES["389a1"], 30_000, workers=3)
    assert one == many
    assert format_coefficients(one) == format_coefficients(many)


def test_file_round_trip(tmp_path, t37):
    path = tmp_path / "37a1.coeffs"
    write_coefficients(t37, path)
    text = path.read_bytes()
    assert text.startswith(b"#newform-coeffs v1\n#k=2 N=37 label=37a1 mode=primes nmax=2000\n2,-2\n3,-3\n")
    assert b"\r" not in text and not any(line.endswith(b" ") for line in text.split(b"\n"))
    back = load_coefficients(path)
    assert dict(back.entries) == dict(t37.entries)
    assert format_coefficients(back) == text.decode()
    assert stat.S_IMODE(os.stat(path).st_mode) == 0o644


def test_tau_file_round_trip(tmp_path):
    tau = delta_tau_table(500)
    write_coefficients(tau, tmp_path / "delta.coeffs")
    back = load_coefficients(tmp_path / "delta.coeffs")
    assert back.mode == "all" and back[500] == tau[500]


GOOD = "#newform-coeffs v1\n#k=2 N=37 label=37a1 mode=primes nmax=10\n2,-2\n3,-3\n5,-2\n7,-1\n"


@pytest.mark.parametrize(
    "text, line",
    [
        (GOOD.replace("v1", "v2"), 1),
        (GOOD.replace("\n", "\r\n"), 1),
        (GOOD.replace("N=37", "N=x"), 2),
        (GOOD.replace("3,-3", "2,-3"), 4),
        (GOOD.replace("7,-1", "11,-1"), 6),
        (GOOD.replace("7,-1", "9,-1"), 6),
        (GOOD.replace("3,-3", "3,-4"), 4),
        (GOOD.replace("5,-2", "5,-2 "), 5),
        (GOOD.replace("5,-2", "5;-2"), 5),
        ("#newform-coeffs v1\n#k=2 N=37 label=x mode=all nmax=3\n1,2\n", 3),
        ("#newform-coeffs v1\n", 2),
    ],
)
def test_parse_errors_carry_line(text, line):
    with pytest.raises(CoefficientParseError) as err:
        parse_coefficients(text)
    assert err.value.line == line


def test_parse_good():
    table = parse_coefficients(GOOD)
    assert table.nmax == 10 and table[7] == -1
    with pytest.raises(CoverageError):
        table[11]


def test_pair_context(t37, t389):
    ctx = PairContext(t37, t389)
    assert ctx.level == 37 * 389
    assert sum_coefficient(ctx, 2) == -4
    assert sum_coefficient(PairContext(t37, t389, sign="minus"), 3) == -1
    with pytest.raises(BadReductionError):
        sum_coefficient(ctx, 37)
    with pytest.raises(CoverageError):
        ctx.good_primes(2001)
    with pytest.raises(ValueError):
        PairContext(t37, t37)
    assert PairContext(t37, t37, sign="minus", control=True).level == 37
    with pytest.raises(ValueError):
        PairContext(t37, delta_tau_table(10))
