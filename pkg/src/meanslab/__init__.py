"""Numerical laboratory for scalar and operator mean inequalities."""

__version__ = "0.1.0"

from .scalar_means import (  # noqa: F401
    DomainError,
    PositivePair,
    arithmetic_bound,
    arithmetic_mean,
    binomial_mean,
    classical_mean,
    geometric_bound,
    geometric_mean,
    ghat_kantorovich_log_gap,
    harmonic_mean,
    heinz_scalar,
    kantorovich,
    kp_bound,
    log_mean,
    specht,
    t_logarithm,
    wyd,
)
