"""Newform coefficient sources: elliptic curves, Delta, and cached files."""

from newform_sums.newforms.curves import Weierstrass, ap_from_curve, count_points_bsgs, count_points_naive
from newform_sums.newforms.tables import (
    CoefficientTable,
    NewformSpec,
    PairContext,
    build_table,
    delta_tau_table,
    dirichlet_convolution,
    extend_to_all_n,
    format_coefficients,
    good_sums,
    load_coefficients,
    normalized_pair,
    parse_coefficients,
    sum_coefficient,
    write_coefficients,
)
from newform_sums.newforms.twist import twist_equivalence_scan

# Default pair: 37a1 (rank 1) and 389a1 (rank 2).  Both are non-CM, not
# isogenous to each other or to a quadratic twist of each other, and have
# surjective mod-ell Galois image at every prime.
FIXTURES = {
    "37a1": NewformSpec("37a1", 2, 37, "weierstrass", ainvs=(0, 0, 1, -1, 0)),
    "389a1": NewformSpec("389a1", 2, 389, "weierstrass", ainvs=(0, 1, 1, -2, 0)),
    # Rational 5-torsion: the mod-5 image is a Borel subgroup.
    "11a1": NewformSpec("11a1", 2, 11, "weierstrass", ainvs=(0, -1, 1, -10, -20), exceptional_primes=(5,)),
    "delta": NewformSpec("delta", 12, 1, "delta_qexp"),
}
DEFAULT_PAIR = ("37a1", "389a1")

__all__ = [
    "CoefficientTable",
    "DEFAULT_PAIR",
    "FIXTURES",
    "NewformSpec",
    "PairContext",
    "Weierstrass",
    "ap_from_curve",
    "build_table",
    "count_points_bsgs",
    "count_points_naive",
    "delta_tau_table",
    "dirichlet_convolution",
    "extend_to_all_n",
    "format_coefficients",
    "good_sums",
    "load_coefficients",
    "normalized_pair",
    "parse_coefficients",
    "sum_coefficient",
    "twist_equivalence_scan",
    "write_coefficients",
]
