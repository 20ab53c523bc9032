"""Scalar means and ratio constants with stable removable-singularity handling.

Every two-argument function here is a symmetric homogeneous mean of positive
reals, evaluated in binary64.  Removable singularities (equal arguments,
parameter values where a defining quotient degenerates) are handled by exact
limit branches; away from them everything is routed through expm1/log1p so
there is no catastrophic cancellation near the singular loci.

The parametrized families share one building block::

    psi(t) = (x^t - y^t) / t,     psi(0) = log(x) - log(y)

which turns the quotients into products of well-conditioned factors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "DomainError",
    "PositivePair",
    "arithmetic_mean",
    "geometric_mean",
    "harmonic_mean",
    "log_mean",
    "classical_mean",
    "t_logarithm",
    "wyd",
    "binomial_mean",
    "geometric_bound",
    "arithmetic_bound",
    "heinz_scalar",
    "kantorovich",
    "specht",
    "kp_bound",
    "ghat_kantorovich_log_gap",
]

_LN2 = math.log(2.0)

# Arguments closer than this (relatively) are treated as equal; all means
# return the midpoint there, which keeps symmetry bitwise-exact.
_EQUAL_BAND = 1e-12


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


def _check_positive(value: float, name: str) -> None:
    try:
        ok = math.isfinite(value) and value > 0
    except TypeError as exc:
        raise DomainError(f"{name} must be a positive finite real, got {value!r}") from exc
    if not ok:
        raise DomainError(f"{name} must be a positive finite real, got {value!r}")


def _check_finite(value: float, name: str) -> None:
    try:
        ok = math.isfinite(value)
    except TypeError as exc:
        raise DomainError(f"{name} must be a finite real, got {value!r}") from exc
    if not ok:
        raise DomainError(f"{name} must be a finite real, got {value!r}")


def _check_pair(x: float, y: float) -> None:
    _check_positive(x, "x")
    _check_positive(y, "y")


@dataclass(frozen=True)
class PositivePair:
    """A validated pair of positive finite reals."""

    x: float
    y: float

    def __post_init__(self) -> None:
        _check_pair(self.x, self.y)


def _log_ratio(x: float, y: float) -> float:
    """log(x/y), accurate also when x and y are relatively close."""
    r = x / y
    if 0.5 < r < 2.0:
        return math.log1p((x - y) / y)
    return math.log(x) - math.log(y)


def _psi(t: float, x: float, y: float) -> float:
    """(x^t - y^t)/t with the continuous extension log(x/y) at t = 0."""
    lr = _log_ratio(x, y)
    # below this the product t*lr can hit gradual underflow and wreck expm1
    if abs(t) < 1e-280:
        return lr
    return y**t * math.expm1(t * lr) / t


def arithmetic_mean(x: float, y: float) -> float:
    """(x + y) / 2."""
    _check_pair(x, y)
    return 0.5 * (x + y)


def geometric_mean(x: float, y: float) -> float:
    """sqrt(x * y), computed overflow-safely as sqrt(x)*sqrt(y)."""
    _check_pair(x, y)
    return math.sqrt(x) * math.sqrt(y)


def harmonic_mean(x: float, y: float) -> float:
    """2xy / (x + y)."""
    _check_pair(x, y)
    return 2.0 / (1.0 / x + 1.0 / y)


def log_mean(x: float, y: float) -> float:
    """Logarithmic mean (x - y)/(log x - log y), with value x at x = y."""
    _check_pair(x, y)
    if x < y:
        x, y = y, x
    if x == y:
        return x
    if x - y < _EQUAL_BAND * x:
        return 0.5 * (x + y)
    return (x - y) / _log_ratio(x, y)


_CLASSICAL = {
    "arithmetic": arithmetic_mean,
    "geometric": geometric_mean,
    "harmonic": harmonic_mean,
    "logarithmic": log_mean,
}


def classical_mean(kind: str, x: float, y: float) -> float:
    """One of the four classical means selected by name.

    ``kind`` is ``arithmetic``, ``geometric``, ``harmonic`` or ``logarithmic``.
    """
    try:
        fn = _CLASSICAL[kind]
    except KeyError:
        raise DomainError(
            f"unknown mean kind {kind!r}; expected one of {sorted(_CLASSICAL)}"
        ) from None
    return fn(x, y)


def t_logarithm(t: float, x: float) -> float:
    """Deformed logarithm (x^t - 1)/t, equal to log(x) at t = 0."""
    _check_positive(x, "x")
    _check_finite(t, "t")
    if t == 0.0:
        return math.log(x)
    u = t * math.log(x)
    if abs(u) >= 0.5:
        return (x**t - 1.0) / t
    return math.expm1(u) / t


def wyd(p: float, x: float, y: float) -> float:
    """Wigner-Yanase-Dyson function.

    W_p(x, y) = p(1-p)(x-y)^2 / ((x^p - y^p)(x^{1-p} - y^{1-p})) for x != y,
    with W_p(x, x) = x and the limits W_0 = W_1 = logarithmic mean.  Defined
    for every finite p and symmetric under p <-> 1-p.
    """
    _check_pair(x, y)
    _check_finite(p, "p")
    if x < y:
        x, y = y, x
    if x == y:
        return x
    if x - y < _EQUAL_BAND * x:
        return 0.5 * (x + y)
    if p == 0.0 or p == 1.0:
        return log_mean(x, y)
    d = x - y
    return d * d / (_psi(p, x, y) * _psi(1.0 - p, x, y))


def binomial_mean(p: float, x: float, y: float) -> float:
    """Power (binomial) mean ((x^p + y^p)/2)^{1/p}, geometric mean at p = 0.

    Evaluated through the identity B_p = G * exp(log(cosh(p*d/2))/p) with
    d = log(x/y), which is cancellation-free uniformly in p.
    """
    _check_pair(x, y)
    _check_finite(p, "p")
    if x < y:
        x, y = y, x
    if x == y:
        return x
    if x - y < _EQUAL_BAND * x:
        return 0.5 * (x + y)
    if p == 0.0:
        return geometric_mean(x, y)
    u = 0.5 * p * _log_ratio(x, y)
    a = abs(u)
    log_cosh = a + math.log1p(math.exp(-2.0 * a)) - _LN2
    return geometric_mean(x, y) * math.exp(log_cosh / p)


def geometric_bound(p: float, x: float, y: float) -> float:
    """Geometric-type one-parameter bound of the logarithmic mean.

    p (xy)^{p/2} (x - y) / (x^p - y^p); equals the geometric mean at p = 1
    and the logarithmic mean at p = 0.  Even in p; accepted for |p| <= 2.
    """
    _check_pair(x, y)
    _check_finite(p, "p")
    if not -2.0 <= p <= 2.0:
        raise DomainError(f"p must lie in [-2, 2], got {p!r}")
    if x < y:
        x, y = y, x
    if x == y:
        return x
    if x - y < _EQUAL_BAND * x:
        return 0.5 * (x + y)
    if p == 0.0:
        return log_mean(x, y)
    return geometric_mean(x, y) ** p * (x - y) / _psi(p, x, y)


def arithmetic_bound(p: float, x: float, y: float) -> float:
    """Arithmetic-type one-parameter bound of the logarithmic mean.

    p (x^p + y^p)(x - y) / (2 (x^p - y^p)); equals the arithmetic mean at
    p = 1 and the logarithmic mean at p = 0.
    """
    _check_pair(x, y)
    _check_finite(p, "p")
    if x < y:
        x, y = y, x
    if x == y:
        return x
    if x - y < _EQUAL_BAND * x:
        return 0.5 * (x + y)
    if p == 0.0:
        return log_mean(x, y)
    return (x**p + y**p) * (x - y) / (2.0 * _psi(p, x, y))


def heinz_scalar(p: float, x: float, y: float) -> float:
    """Heinz mean (x^p y^{1-p} + x^{1-p} y^p)/2, symmetric under p <-> 1-p."""
    _check_pair(x, y)
    _check_finite(p, "p")
    if x == y:
        return x
    return 0.5 * (x**p * y ** (1.0 - p) + x ** (1.0 - p) * y**p)


def kantorovich(x: float) -> float:
    """Kantorovich constant (x + 1)^2 / (4x) >= 1, equal to 1 only at x = 1."""
    _check_positive(x, "x")
    s = x + 1.0
    return s * s / (4.0 * x)


def specht(x: float) -> float:
    """Specht ratio x^{1/(x-1)} / (e log x^{1/(x-1)}), with value 1 at x = 1.

    Evaluated in log space as exp(u - 1 - log u) with u = log(x)/(x - 1),
    which avoids overflow and is stable near x = 1.
    """
    _check_positive(x, "x")
    if x == 1.0:
        return 1.0
    d = x - 1.0
    u = math.log1p(d) / d
    t = u - 1.0 - math.log(u)
    if t > 709.0:
        return math.inf
    return math.exp(t)


def kp_bound(alpha: float, beta: float, p: float) -> float:
    """max of K(t)^{p(1-p)} over t in [alpha, beta].

    The Kantorovich constant decreases on (0, 1) and increases on (1, oo),
    so the maximum over an interval sits at an endpoint.
    """
    _check_positive(alpha, "alpha")
    _check_positive(beta, "beta")
    _check_finite(p, "p")
    if alpha > beta:
        raise DomainError(f"alpha must not exceed beta, got {alpha!r} > {beta!r}")
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p must lie in [0, 1], got {p!r}")
    return max(kantorovich(alpha), kantorovich(beta)) ** (p * (1.0 - p))


def ghat_kantorovich_log_gap(p: float, x: float) -> float:
    """log of K(x)^{p(1-p)} * geometric_bound(p, x, 1) / wyd(p, x, 1).

    Expanded as (p/2) log x + p(1-p)(2 log(x+1) - log 4x) - log(1-p)
    - log(x-1) + log(x^{1-p} - 1); positive exactly where the geometric-type
    bound exceeds K(x)^{-p(1-p)} W_p(x, 1).  Requires x > 1 and 0 < p < 1 so
    every logarithm has a positive argument; the limit at x -> 1+ is 0.
    """
    _check_finite(p, "p")
    if not (isinstance(x, (int, float)) and math.isfinite(x) and x > 1.0):
        raise DomainError(f"x must be a finite real > 1, got {x!r}")
    if not 0.0 < p < 1.0:
        raise DomainError(f"p must lie strictly inside (0, 1), got {p!r}")
    lx = math.log(x)
    return (
        0.5 * p * lx
        + p * (1.0 - p) * (2.0 * math.log(x + 1.0) - math.log(4.0 * x))
        - math.log(1.0 - p)
        - math.log(x - 1.0)
        + math.log(math.expm1((1.0 - p) * lx))
    )
