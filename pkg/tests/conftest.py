import os
from pathlib import Path

import pytest

from newform_sums.newforms import FIXTURES, PairContext, build_table, load_coefficients, write_coefficients

ROOT = Path(__file__).resolve().parents[1]
CACHE_DIR = Path(os.environ.get("NEWFORM_SUMS_CACHE", ROOT / "cache"))
SMALL_X = 20_000
FULL_X = 10**6


def cached_table(label: str, nmax: int):
    """Fixture table to nmax, reusing <cache>/<label>.coeffs when it covers nmax."""
    path = CACHE_DIR / f"{label}.coeffs"
    if path.exists():
        table = load_coefficients(path)
        if table.nmax >= nmax:
            return type(table)(FIXTURES[label], table.nmax, table.mode, table.entries)
    table = build_table(FIXTURES[label], nmax, workers=os.cpu_count() or 1)
    write_coefficients(table, path)
    return table


@pytest.fixture(scope="session")
def small_tables():
    return tuple(build_table(FIXTURES[label], SMALL_X) for label in ("37a1", "389a1"))


@pytest.fixture(scope="session")
def small_pair(small_tables):
    return PairContext(*small_tables)


@pytest.fixture(scope="session")
def full_pair():
    return PairContext(cached_table("37a1", FULL_X), cached_table("389a1", FULL_X))


# (number, title, passed, detail) for every acceptance criterion that ran.
ACCEPTANCE: list[tuple[int, str, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {number:2d}. {title}: {detail}")
