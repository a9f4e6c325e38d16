"""Command-line experiment runner.

    newform-sums coeffs --x 1000000
    newform-sums chebotarev --x 1000000 --ell 5,7,11
    newform-sums all --x 10000 --X 10000 --out reports/
    newform-sums validate-report reports/lpf.json

Every experiment writes <out>/<name>.json and <out>/<name>.csv and prints one
summary line.  Exit status: 0 for pass/report-only, 1 if any report failed,
2 for usage, parameter, or missing-cache errors.
"""

from __future__ import annotations

import argparse
import fcntl
import math
import os
import sys
import time
from contextlib import contextmanager

from newform_sums import galois, stats
from newform_sums.config import PARSERS, ConfigError, ExperimentConfig, parse_config, parse_value
from newform_sums.errors import (
    CapacityError,
    CoefficientParseError,
    CoverageError,
    ParameterError,
    UnsupportedModulusError,
)
from newform_sums.newforms import FIXTURES, PairContext, build_table, load_coefficients, twist_equivalence_scan, write_coefficients
from newform_sums.report import DensityReport, ReportFormatError, validate_report

EXPERIMENTS = (
    "delta",
    "chebotarev",
    "satotate",
    "vanishing",
    "tails",
    "normal-order",
    "lpf",
    "grh",
    "convolution",
    "sieve-sets",
    "twist-scan",
)
SUBCOMMANDS = ("coeffs",) + EXPERIMENTS + ("all", "validate-report")
BSGS_MS_PER_PRIME = 0.35

USAGE_ERRORS = (
    ConfigError,
    ParameterError,
    CoverageError,
    CapacityError,
    UnsupportedModulusError,
    CoefficientParseError,
)


class MissingCacheError(ValueError):
    pass


# -- argument parsing -------------------------------------------------------


def _flag_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    g = p.add_argument_group("experiment options (override --config values)")
    g.add_argument("--x", help="prime range bound x (default 10**4)")
    g.add_argument("--X", help="integer range bound X for convolution/sieve sets (default 10**4)")
    g.add_argument("--ell", help="comma-separated moduli h for chebotarev (default 5,7,11)")
    g.add_argument("--epsilon", help="epsilon in the threshold exponents (default 0.1)")
    g.add_argument("--M", help="tail parameter M > 1/4 (default 2)")
    g.add_argument("--eta", help="u = x^eta for the normal-order moment, 0 < eta < 1/14 (default 1/15)")
    g.add_argument("--sign", choices=("plus", "minus"), help="S_p = a_f(p) + a_g(p) or a_f(p) - a_g(p)")
    g.add_argument("--pair", help="labelF,labelG: fixtures %s or file:<path>" % ",".join(FIXTURES))
    g.add_argument("--grid", help="Sato-Tate grid size per axis (default 4)")
    g.add_argument("--lmax", help="largest modulus for delta tables (default 50)")
    g.add_argument("--k", help="weight for delta tables (default 2)")
    g.add_argument("--cache-dir", dest="cache_dir", help="coefficient cache directory (default ./cache)")
    g.add_argument("--out", help="report directory (default ./reports)")
    g.add_argument("--threads", help="worker processes for coefficient builds, or auto (default 1)")
    g.add_argument("--seed", help="seed for randomized point counting/factoring (default 0)")
    g.add_argument("--config", help="key=value config file")
    g.add_argument("--override-exceptional", dest="override_exceptional", action="store_true", default=None,
                   help="allow moduli whose mod-ell image is declared non-full")
    g.add_argument("--timing", action="store_true", default=None,
                   help="record runtime_ms in reports (breaks byte-reproducibility)")
    g.add_argument("--dry-run", dest="dry_run", action="store_true",
                   help="print planned prime ranges and estimated work, then exit")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="newform-sums",
        description="Experiments on sums of Fourier coefficients of two newforms.",
        allow_abbrev=False,
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="subcommand")
    flags = _flag_parser()
    helps = {
        "coeffs": "build or refresh the coefficient cache",
        "delta": "exact delta(h) tables (CSV of GaloisCounts) and asymptotics",
        "chebotarev": "frequency of h | S_p against delta(h)",
        "satotate": "joint Sato-Tate grid against the product semicircle law",
        "vanishing": "count of S_p = 0 across decades",
        "tails": "|S_p| >= p^((k-1)/2)/M against the model mass",
        "normal-order": "second moments of omega(S_p)",
        "lpf": "largest prime factor threshold density over primes",
        "grh": "GRH-conditional growth fractions (report-only)",
        "convolution": "threshold density of a_f * a_g over integers",
        "sieve-sets": "densities of the sets Q and T",
        "twist-scan": "heuristic twist-equivalence scan",
        "all": "coeffs followed by every experiment",
    }
    for name in SUBCOMMANDS[:-1]:
        sub.add_parser(name, parents=[flags], help=helps[name], allow_abbrev=False)
    v = sub.add_parser("validate-report", help="check report files parse and round-trip", allow_abbrev=False)
    v.add_argument("paths", nargs="+")
    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    overrides = {}
    for key in PARSERS:
        raw = getattr(args, key, None)
        if raw is None:
            continue
        overrides[key] = raw if isinstance(raw, bool) else parse_value(key, str(raw))
    return parse_config(getattr(args, "config", None), overrides)


# -- cache ------------------------------------------------------------------


def cache_path(cfg: ExperimentConfig, label: str) -> str:
    return os.path.join(cfg.cache_dir, f"{label}.coeffs")


def required_nmax(cfg: ExperimentConfig) -> int:
    return max(cfg.x, cfg.X)


@contextmanager
def cache_lock(cfg: ExperimentConfig):
    os.makedirs(cfg.cache_dir, exist_ok=True)
    with open(os.path.join(cfg.cache_dir, ".lock"), "w") as fh:
        try:
            fcntl.flock(fh, fcntl.LOCK_EX | fcntl.LOCK_NB)
        except BlockingIOError:
            raise ParameterError(f"another experiment holds the lock on {cfg.cache_dir}") from None
        try:
            yield
        finally:
            fcntl.flock(fh, fcntl.LOCK_UN)


def load_table(cfg: ExperimentConfig, label: str):
    if label.startswith("file:"):
        return load_coefficients(label[5:])
    if label not in FIXTURES:
        raise ConfigError(f"unknown newform label {label!r}")
    path = cache_path(cfg, label)
    if not os.path.exists(path):
        raise MissingCacheError(f"no cached coefficients for {label}; run `newform-sums coeffs` first")
    table = load_coefficients(path)
    spec = FIXTURES[label]
    return type(table)(spec, table.nmax, table.mode, table.entries)


def load_pair(cfg: ExperimentConfig) -> PairContext:
    f, g = (load_table(cfg, label) for label in cfg.pair)
    need = required_nmax(cfg)
    for t in (f, g):
        if t.nmax < need:
            raise MissingCacheError(
                f"cache for {t.spec.label} covers n <= {t.nmax}, need {need}; run `newform-sums coeffs` first"
            )
    return PairContext(f, g, sign=cfg.sign)


def run_coeffs(cfg: ExperimentConfig) -> DensityReport:
    nmax = required_nmax(cfg)
    rows = []
    for label in cfg.pair:
        if label.startswith("file:"):
            table = load_coefficients(label[5:])
            rows.append({"label": table.spec.label, "nmax": table.nmax, "entries": len(table.entries), "action": "external"})
            continue
        if label not in FIXTURES:
            raise ConfigError(f"unknown newform label {label!r}")
        path = cache_path(cfg, label)
        if os.path.exists(path) and load_coefficients(path).nmax >= nmax:
            table, action = load_coefficients(path), "cached"
        else:
            table, action = build_table(FIXTURES[label], nmax, workers=cfg.threads, seed=cfg.seed), "built"
            write_coefficients(table, path)
        rows.append({"label": label, "nmax": table.nmax, "entries": len(table.entries), "action": action})
    return DensityReport(
        "coeffs",
        params={"pair": list(cfg.pair), "nmax": nmax},
        observed={"rows": rows, "deligne_bound": "checked"},
        status="pass",
    )


# -- experiments ------------------------------------------------------------


def _decades(x: int) -> list[int]:
    out = [10**j for j in range(2, 20) if 10**j < x]
    return out + [x]


def run_experiment(name: str, cfg: ExperimentConfig) -> list[tuple[str, DensityReport, str | None]]:
    """[(file stem, report, csv override)] for one experiment."""
    if name == "delta":
        rows = [galois.galois_counts(h, cfg.k) for h in galois.supported_moduli(cfg.lmax)]
        return [("delta", galois.asymptotic_report(cfg.lmax, cfg.k), galois.counts_to_csv(rows))]
    ctx = load_pair(cfg)
    x, X = cfg.x, cfg.X
    if name == "chebotarev":
        return [("chebotarev", stats.chebotarev_report(ctx, x, cfg.ell, cfg.override_exceptional), None)]
    if name == "satotate":
        _, report = stats.satotate_report(ctx, x, cfg.cut_points())
        return [("satotate", report, None)]
    if name == "vanishing":
        return [("vanishing", stats.vanishing_report(ctx, _decades(x)), None)]
    if name == "tails":
        return [("tails", stats.tail_density_report(ctx, x, cfg.M), None)]
    if name == "normal-order":
        u = cfg.u if cfg.u_policy == "fixed" else None
        return [
            ("normal-order", stats.normal_order_moment_logp(ctx, x), None),
            ("normal-order-u", stats.normal_order_moment(ctx, x, eta=cfg.eta, u=u), None),
        ]
    if name == "lpf":
        return [("lpf", stats.lpf_threshold_density(ctx, x, cfg.epsilon), None)]
    if name == "grh":
        return [("grh", stats.grh_growth_report(ctx, x, cfg.epsilon), None)]
    if name == "convolution":
        return [("convolution", stats.convolution_density(ctx, X, cfg.epsilon, _decades(X)), None)]
    if name == "sieve-sets":
        prime_set = stats.default_prime_set(ctx, X, cfg.epsilon)
        return [("sieve-sets", stats.sieve_set_density(X, cfg.epsilon, prime_set, _decades(X)), None)]
    if name == "twist-scan":
        return [("twist-scan", twist_equivalence_scan(ctx, x), None)]
    raise ValueError(f"unknown experiment {name!r}")


def _summary(stem: str, report: DensityReport) -> str:
    obs = report.observed
    keys = ("fraction", "moment", "ratio_good", "Q_density", "fitted_C", "sample", "fraction_a")
    extra = " ".join(f"{k}={obs[k]:.6g}" for k in keys if isinstance(obs.get(k), (int, float)) and not isinstance(obs.get(k), bool))
    if stem == "chebotarev":
        extra = " ".join(f"h={r['h']}:{r['ratio_good']:.5f}/{r['delta']:.5f}" for r in report.rows)
    if stem == "vanishing" and report.rows:
        extra = f"ratio@x={report.rows[-1]['ratio']:.6g}"
    return f"{stem}: {report.status} {extra}".rstrip()


def emit(cfg: ExperimentConfig, stem: str, report: DensityReport, csv_text: str | None, started: float) -> None:
    if cfg.timing:
        report.runtime_ms = int((time.perf_counter() - started) * 1000)
    os.makedirs(cfg.out, exist_ok=True)
    with open(os.path.join(cfg.out, f"{stem}.json"), "w", encoding="ascii", newline="\n") as fh:
        fh.write(report.to_json())
    with open(os.path.join(cfg.out, f"{stem}.csv"), "w", encoding="ascii", newline="\n") as fh:
        fh.write(csv_text if csv_text is not None else report.to_csv())
    print(_summary(stem, report))


def dry_run(command: str, cfg: ExperimentConfig) -> None:
    nmax = required_nmax(cfg)
    est_primes = int(nmax / math.log(nmax)) if nmax > 2 else 0
    print(f"command: {command}  pair: {','.join(cfg.pair)}  x={cfg.x} X={cfg.X}")
    for label in cfg.pair:
        path = cache_path(cfg, label)
        cached = 0
        if os.path.exists(path):
            with open(path, encoding="ascii") as fh:
                fh.readline()
                meta = fh.readline()
            cached = int(meta.rsplit("nmax=", 1)[-1]) if "nmax=" in meta else 0
        if cached >= nmax:
            print(f"  {label}: cached to {cached}, no build needed")
        else:
            print(f"  {label}: build primes 2..{nmax} (~{est_primes} primes, ~{est_primes * BSGS_MS_PER_PRIME / 1000 / cfg.threads:.0f} s)")
    steps = EXPERIMENTS if command == "all" else (command,)
    print(f"  experiments: {', '.join(steps)}")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "validate-report":
        status = 0
        for path in args.paths:
            try:
                with open(path, encoding="ascii", newline="") as fh:
                    validate_report(fh.read())
                print(f"{path}: ok")
            except (OSError, ReportFormatError, UnicodeDecodeError) as exc:
                print(f"{path}: invalid: {exc}", file=sys.stderr)
                status = 1
        return status
    try:
        cfg = config_from_args(args)
        if args.dry_run:
            dry_run(args.command, cfg)
            return 0
        failed = False
        with cache_lock(cfg):
            if args.command in ("coeffs", "all"):
                started = time.perf_counter()
                report = run_coeffs(cfg)
                emit(cfg, "coeffs", report, None, started)
            steps = EXPERIMENTS if args.command == "all" else (() if args.command == "coeffs" else (args.command,))
            for name in steps:
                started = time.perf_counter()
                for stem, report, csv_text in run_experiment(name, cfg):
                    emit(cfg, stem, report, csv_text, started)
                    failed = failed or report.status == "fail"
        return 1 if failed else 0
    except MissingCacheError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
