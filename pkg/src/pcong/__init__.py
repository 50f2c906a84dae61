"""Congruence engine for r-colored partition functions modulo small primes."""

__version__ = "0.1.0"

from .series import (
    FpSeries,
    eta_multiplier,
    eta_power,
    kronecker,
    pr_series,
    pr_table,
    series_div,
    series_mul,
    theta_operator,
    u_operator,
    v_operator,
)

__all__ = [
    "__version__",
    "FpSeries",
    "eta_multiplier",
    "eta_power",
    "kronecker",
    "pr_series",
    "pr_table",
    "series_div",
    "series_mul",
    "theta_operator",
    "u_operator",
    "v_operator",
]
