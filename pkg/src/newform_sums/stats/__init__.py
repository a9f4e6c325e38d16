"""Empirical experiments on S_p = a_f(p) +- a_g(p) and on a_f * a_g."""

from newform_sums.stats.counting import (
    chebotarev_report,
    pi_fg,
    pi_fg_star,
    prime_count,
    residue_counts,
    simulate_uniform_residues,
    vanishing_count,
    vanishing_report,
)
from newform_sums.stats.normal_order import normal_order_moment, normal_order_moment_logp
from newform_sums.stats.satotate import (
    SatoTateGrid,
    grid_masses,
    satotate_report,
    st_cdf,
    st_density,
    tail_density_report,
    tail_model_mass,
    uniform_cuts,
)
from newform_sums.stats.thresholds import (
    convolution_density,
    convolution_values,
    default_prime_set,
    grh_growth_report,
    lpf_threshold,
    lpf_threshold_density,
    passes_lpf,
    sieve_set_density,
)

__all__ = [
    "SatoTateGrid",
    "chebotarev_report",
    "convolution_density",
    "convolution_values",
    "default_prime_set",
    "grh_growth_report",
    "grid_masses",
    "lpf_threshold",
    "lpf_threshold_density",
    "normal_order_moment",
    "normal_order_moment_logp",
    "passes_lpf",
    "pi_fg",
    "pi_fg_star",
    "prime_count",
    "residue_counts",
    "satotate_report",
    "sieve_set_density",
    "simulate_uniform_residues",
    "st_cdf",
    "st_density",
    "tail_density_report",
    "tail_model_mass",
    "uniform_cuts",
    "vanishing_count",
    "vanishing_report",
]
