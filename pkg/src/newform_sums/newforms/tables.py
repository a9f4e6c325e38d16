"""Coefficient tables for newforms, the on-disk cache format, and derived series."""

from __future__ import annotations

import math
import os
import re
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping

from newform_sums import arith
from newform_sums.errors import (
    BadReductionError,
    CoefficientOverflowError,
    CoefficientParseError,
    CoverageError,
    IncompleteInputError,
)
from newform_sums.newforms import curves, qexp

SOURCES = ("weierstrass", "delta_qexp", "file")
MODES = ("primes", "all")
MAGNITUDE_CAP = 1 << 127

HEADER_LINE = "#newform-coeffs v1"
_META_RE = re.compile(r"#k=(\d+) N=(\d+) label=(\S+) mode=(primes|all) nmax=(\d+)")
_ROW_RE = re.compile(r"(\d+),(-?\d+)")


@dataclass(frozen=True)
class NewformSpec:
    label: str
    weight: int
    level: int
    source: str
    ainvs: tuple[int, ...] | None = None
    path: str | None = None
    non_cm: bool = True
    # Primes where the mod-ell image is known not to be full (declared input).
    exceptional_primes: tuple[int, ...] = ()

    def __post_init__(self):
        if self.source not in SOURCES:
            raise ValueError(f"unknown source {self.source!r}")
        if self.weight < 2 or self.weight % 2:
            raise ValueError(f"weight must be even and >= 2, got {self.weight}")
        if self.level < 1:
            raise ValueError("level must be positive")
        if re.search(r"\s", self.label) or not self.label:
            raise ValueError(f"label must be a nonempty token, got {self.label!r}")
        if self.source == "weierstrass":
            if self.weight != 2:
                raise ValueError("curve sources have weight 2")
            if self.ainvs is None or len(self.ainvs) != 5:
                raise ValueError("curve sources need five a-invariants")
            if self.curve.discriminant == 0:
                raise ValueError("singular Weierstrass model")
        if self.source == "delta_qexp" and (self.weight, self.level) != (12, 1):
            raise ValueError("Delta has weight 12 and level 1")

    @property
    def curve(self) -> curves.Weierstrass:
        return curves.Weierstrass.from_list(self.ainvs)

    def is_good(self, p: int) -> bool:
        return self.level % p != 0


@dataclass(frozen=True)
class CoefficientTable:
    spec: NewformSpec
    nmax: int
    mode: str
    entries: Mapping[int, int] = field(repr=False)

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")

    def __getitem__(self, n: int) -> int:
        try:
            return self.entries[n]
        except KeyError:
            raise CoverageError(f"{self.spec.label}: no coefficient at n={n} (nmax={self.nmax})") from None

    def __eq__(self, other) -> bool:
        if not isinstance(other, CoefficientTable):
            return NotImplemented
        return (
            (self.spec.label, self.spec.weight, self.spec.level, self.nmax, self.mode)
            == (other.spec.label, other.spec.weight, other.spec.level, other.nmax, other.mode)
            and dict(self.entries) == dict(other.entries)
        )

    @property
    def weight(self) -> int:
        return self.spec.weight

    def covers(self, x: int) -> bool:
        return x <= self.nmax

    def validate(self) -> None:
        """Check a(1) = 1 (all-n mode), magnitudes, and the Deligne bound at primes."""
        if self.mode == "all" and self.nmax >= 1 and self.entries.get(1) != 1:
            raise ValueError(f"{self.spec.label}: a(1) must be 1")
        for n, a in self.entries.items():
            if abs(a) >= MAGNITUDE_CAP:
                raise CoefficientOverflowError(n)
            if arith.is_prime(n) and not within_deligne(a, n, self.weight):
                raise ValueError(f"{self.spec.label}: |a({n})| = {abs(a)} violates the Deligne bound")


def within_deligne(a: int, p: int, k: int) -> bool:
    """|a| <= 2 p^((k-1)/2), decided exactly in integers."""
    return a * a <= 4 * p ** (k - 1)


# -- building ---------------------------------------------------------------


def _ap_chunk(ainvs, primes, seed):
    curve = curves.Weierstrass.from_list(ainvs)
    return [(p, curves.ap_any_prime(curve, p, seed=seed)) for p in primes]


def curve_prime_table(spec: NewformSpec, nmax: int, workers: int = 1, seed: int = 0) -> CoefficientTable:
    """a(p) for every prime p <= nmax (bad primes via the singular-cubic count)."""
    primes = list(arith.primes_up_to(nmax)) if nmax >= 2 else []
    if workers <= 1 or len(primes) < 2000:
        rows = _ap_chunk(spec.ainvs, primes, seed)
    else:
        # Chunks are keyed by p, so the merge does not depend on scheduling.
        nchunks = workers * 8
        chunks = [primes[i::nchunks] for i in range(nchunks)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(_ap_chunk, [spec.ainvs] * nchunks, chunks, [seed] * nchunks)
            rows = sorted(r for part in parts for r in part)
    table = CoefficientTable(spec, nmax, "primes", dict(rows))
    table.validate()
    return table


def delta_tau_table(nmax: int) -> CoefficientTable:
    """tau(n) for 1 <= n <= nmax from the q-expansion of Delta (all-n mode)."""
    values = qexp.tau_values(nmax)
    spec = NewformSpec("delta", 12, 1, "delta_qexp")
    table = CoefficientTable(spec, nmax, "all", {n: values[n] for n in range(1, nmax + 1)})
    table.validate()
    return table


def build_table(spec: NewformSpec, nmax: int, workers: int = 1, seed: int = 0) -> CoefficientTable:
    if spec.source == "weierstrass":
        return curve_prime_table(spec, nmax, workers, seed)
    if spec.source == "delta_qexp":
        return delta_tau_table(nmax)
    table = load_coefficients(spec.path)
    if table.nmax < nmax:
        raise CoverageError(f"{spec.path} covers n <= {table.nmax}, need {nmax}")
    return table


def restrict_to_primes(table: CoefficientTable) -> CoefficientTable:
    entries = {n: a for n, a in table.entries.items() if arith.is_prime(n)}
    return CoefficientTable(table.spec, table.nmax, "primes", entries)


# -- cache file format ------------------------------------------------------


def format_coefficients(table: CoefficientTable) -> str:
    s = table.spec
    lines = [HEADER_LINE, f"#k={s.weight} N={s.level} label={s.label} mode={table.mode} nmax={table.nmax}"]
    lines.extend(f"{n},{table.entries[n]}" for n in sorted(table.entries))
    return "\n".join(lines) + "\n"


def write_coefficients(table: CoefficientTable, path) -> None:
    """Atomic write: a temp file in the target directory, then os.replace."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".coeffs-")
    try:
        with os.fdopen(fd, "w", encoding="ascii", newline="\n") as fh:
            fh.write(format_coefficients(table))
        os.chmod(tmp, 0o644)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def parse_coefficients(text: str, path: str | None = None) -> CoefficientTable:
    if "\r" in text:
        raise CoefficientParseError("CR characters are not allowed", 1)
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0] != HEADER_LINE:
        raise CoefficientParseError(f"expected {HEADER_LINE!r}", 1)
    if len(lines) < 2:
        raise CoefficientParseError("missing metadata line", 2)
    meta = _META_RE.fullmatch(lines[1])
    if meta is None:
        raise CoefficientParseError(f"malformed metadata {lines[1]!r}", 2)
    k, level, label, mode, nmax = meta.groups()
    k, level, nmax = int(k), int(level), int(nmax)
    try:
        spec = NewformSpec(label, k, level, "file", path=path)
    except ValueError as exc:
        raise CoefficientParseError(str(exc), 2) from None
    entries: dict[int, int] = {}
    last = 0
    for lineno, line in enumerate(lines[2:], start=3):
        row = _ROW_RE.fullmatch(line)
        if row is None:
            raise CoefficientParseError(f"malformed row {line!r}", lineno)
        n, a = int(row.group(1)), int(row.group(2))
        if n <= last:
            raise CoefficientParseError(f"index {n} is not increasing", lineno)
        if n > nmax:
            raise CoefficientParseError(f"index {n} exceeds nmax={nmax}", lineno)
        if abs(a) >= MAGNITUDE_CAP:
            raise CoefficientParseError(f"|a({n})| exceeds 127 bits", lineno)
        n_prime = arith.is_prime(n)
        if mode == "primes" and not n_prime:
            raise CoefficientParseError(f"index {n} is not prime in primes mode", lineno)
        if mode == "all" and n == 1 and a != 1:
            raise CoefficientParseError("a(1) must be 1", lineno)
        if n_prime and not within_deligne(a, n, k):
            raise CoefficientParseError(f"|a({n})| = {abs(a)} violates the Deligne bound for k={k}", lineno)
        entries[n] = a
        last = n
    return CoefficientTable(spec, nmax, mode, entries)


def load_coefficients(path) -> CoefficientTable:
    path = os.fspath(path)
    with open(path, encoding="ascii", newline="") as fh:
        return parse_coefficients(fh.read(), path=path)


# -- derived series ---------------------------------------------------------


def extend_to_all_n(table: CoefficientTable, nmax: int | None = None) -> CoefficientTable:
    """a(n) for all n <= nmax from a(p), via the Hecke relations.

    Good p:  a(p^(r+1)) = a(p) a(p^r) - p^(k-1) a(p^(r-1)).
    p | N:   a(p^(r+1)) = a(p) a(p^r).
    Coprime m, n: a(mn) = a(m) a(n).
    """
    nmax = table.nmax if nmax is None else nmax
    k = table.weight
    out = {1: 1} if nmax >= 1 else {}
    if nmax < 2:
        return CoefficientTable(table.spec, nmax, "all", out)
    spf = arith.smallest_prime_factor_table(nmax).tolist()
    for n in range(2, nmax + 1):
        p = spf[n]
        m, e = n, 0
        while m % p == 0:
            m //= p
            e += 1
        if m > 1:
            out[n] = out[p**e] * out[m]
            continue
        if p not in table.entries:
            raise IncompleteInputError(f"{table.spec.label}: missing a({p})")
        ap = table.entries[p]
        if e == 1:
            out[n] = ap
        elif table.spec.is_good(p):
            out[n] = ap * out[n // p] - p ** (k - 1) * out.get(n // (p * p), 1)
        else:
            out[n] = ap * out[n // p]
    return CoefficientTable(table.spec, nmax, "all", out)


def dirichlet_convolution(f: CoefficientTable, g: CoefficientTable, nmax: int) -> list[int]:
    """[(f*g)(0)=0, (f*g)(1), ..., (f*g)(nmax)] with (f*g)(n) = sum_{dm=n} f(d) g(m)."""
    for t in (f, g):
        if t.mode != "all":
            raise IncompleteInputError(f"{t.spec.label}: convolution needs an all-n table")
        if t.nmax < nmax:
            raise CoverageError(f"{t.spec.label}: covers n <= {t.nmax}, need {nmax}")
    fv = [0] + [f.entries[n] for n in range(1, nmax + 1)]
    gv = [0] + [g.entries[n] for n in range(1, nmax + 1)]
    out = [0] * (nmax + 1)
    for d in range(1, nmax + 1):
        fd = fv[d]
        if fd == 0:
            continue
        for m in range(1, nmax // d + 1):
            out[d * m] += fd * gv[m]
    for n, v in enumerate(out):
        if abs(v) >= MAGNITUDE_CAP:
            raise CoefficientOverflowError(n)
    return out


# -- pairs ------------------------------------------------------------------


@dataclass(frozen=True)
class PairContext:
    f: CoefficientTable
    g: CoefficientTable
    sign: str = "plus"
    good_only: bool = True
    # Degenerate controls (f = g) are allowed only when asked for explicitly.
    control: bool = False

    def __post_init__(self):
        if self.sign not in ("plus", "minus"):
            raise ValueError(f"sign must be plus or minus, got {self.sign!r}")
        if self.f.weight != self.g.weight:
            raise ValueError("paired forms must share a weight")
        if self.f.spec.label == self.g.spec.label and not self.control:
            raise ValueError("paired forms need distinct labels")

    @property
    def level(self) -> int:
        return math.lcm(self.f.spec.level, self.g.spec.level)

    @property
    def weight(self) -> int:
        return self.f.weight

    @property
    def nmax(self) -> int:
        return min(self.f.nmax, self.g.nmax)

    def require(self, x: int) -> None:
        if x > self.nmax:
            raise CoverageError(f"tables cover x <= {self.nmax}, asked for {x}")

    def good_primes(self, x: int) -> list[int]:
        """Primes p <= x with p not dividing N."""
        self.require(x)
        if x < 2:
            return []
        N = self.level
        return [p for p in arith.primes_up_to(x) if N % p]


def sum_coefficient(ctx: PairContext, p: int) -> int:
    """S_p = a_f(p) + a_g(p), or a_f(p) - a_g(p) in minus mode."""
    if p > ctx.nmax:
        raise CoverageError(f"p={p} beyond table range {ctx.nmax}")
    if ctx.good_only and ctx.level % p == 0:
        raise BadReductionError(p, f"p={p} divides the level {ctx.level}")
    af, ag = ctx.f[p], ctx.g[p]
    return af + ag if ctx.sign == "plus" else af - ag


def good_sums(ctx: PairContext, x: int) -> list[tuple[int, int]]:
    """(p, S_p) for every good prime p <= x."""
    fe, ge = ctx.f.entries, ctx.g.entries
    plus = ctx.sign == "plus"
    out = []
    for p in ctx.good_primes(x):
        if p not in fe or p not in ge:
            raise CoverageError(f"missing coefficient at p={p}")
        out.append((p, fe[p] + ge[p] if plus else fe[p] - ge[p]))
    return out


def normalized_pair(ctx: PairContext, p: int) -> tuple[float, float]:
    """(a_f(p), a_g(p)) / p^((k-1)/2)."""
    if p > ctx.nmax:
        raise CoverageError(f"p={p} beyond table range {ctx.nmax}")
    scale = p ** ((ctx.weight - 1) / 2)
    return ctx.f[p] / scale, ctx.g[p] / scale
