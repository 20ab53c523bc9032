"""Catalog of scalar mean inequalities with grid verification and counterexample search.

The catalog stores every inequality as a pairwise case ``lhs <= rhs`` over a
region of the (x, p) plane, where both sides are named expressions evaluated
at (x, 1) through :mod:`meanslab.scalar_means` (the single source of truth
for the formulas).  Chains are split into their pairwise links.  A case
carries one of three statuses:

* ``proven``  -- expected to pass grid verification,
* ``false``   -- a counterexample is known to exist and must be found,
* ``open``    -- no judgement; scans only report the best observed gap.

Violation semantics are relative: a point passes iff
``lhs - rhs <= tol * max(1, |lhs|, |rhs|)``.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import scalar_means as sm

__all__ = [
    "ConfigError",
    "EvaluationError",
    "VacuousRegionError",
    "MeanExpr",
    "InequalityCase",
    "GridSpec",
    "ViolationReport",
    "SharpnessReport",
    "SearchConfig",
    "SearchResult",
    "NoOrderingReport",
    "builtin_catalog",
    "shifted_chain_cases",
    "lookup",
    "case_names",
    "evaluate",
    "default_grid",
    "verify",
    "sharpness",
    "default_search_config",
    "search_counterexample",
    "no_ordering_witness",
    "emit_csv",
    "json_text",
]

DEFAULT_TOLERANCE = 1e-10
DEFAULT_X_RANGE = (1e-4, 1e4)
DEFAULT_X_POINTS = 400
DEFAULT_P_POINTS = 65

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


class ConfigError(ValueError):
    """A grid or search configuration violates its invariants."""


class EvaluationError(RuntimeError):
    """An expression produced a non-finite value inside its declared region."""


class VacuousRegionError(RuntimeError):
    """A grid has no intersection with a case's validity region."""


@dataclass(frozen=True)
class MeanExpr:
    """A named scalar expression evaluable at (x, p)."""

    tag: str
    description: str
    fn: Callable[[float, float], float] = field(compare=False)

    def __call__(self, x: float, p: float) -> float:
        return self.fn(x, p)


def _logmean(x: float) -> float:
    return sm.log_mean(x, 1.0)


def _logmean_sq(x: float) -> float:
    l = sm.log_mean(x, 1.0)
    return l * l


_E = {}


def _register(tag: str, description: str, fn: Callable[[float, float], float]) -> MeanExpr:
    expr = MeanExpr(tag, description, fn)
    _E[tag] = expr
    return expr


_register("arith", "arithmetic mean of (x, 1)", lambda x, p: sm.arithmetic_mean(x, 1.0))
_register("geom", "geometric mean of (x, 1)", lambda x, p: sm.geometric_mean(x, 1.0))
_register("harm", "harmonic mean of (x, 1)", lambda x, p: sm.harmonic_mean(x, 1.0))
_register("logmean", "logarithmic mean of (x, 1)", lambda x, p: _logmean(x))
_register("wyd", "Wigner-Yanase-Dyson function at (x, 1)", lambda x, p: sm.wyd(p, x, 1.0))
_register(
    "wyd_half",
    "((sqrt x + 1)/2)^2, the p = 1/2 value of the WYD function",
    lambda x, p: sm.binomial_mean(0.5, x, 1.0),
)
_register("logmean_sq", "square of the logarithmic mean", lambda x, p: _logmean_sq(x))
_register(
    "hh_lower",
    "trapezoidal bound 4 L^2 / ((x^p + 1)(x^{1-p} + 1))",
    lambda x, p: 4.0 * _logmean_sq(x) / ((x**p + 1.0) * (x ** (1.0 - p) + 1.0)),
)
_register(
    "hh_upper",
    "midpoint bound L^2 / sqrt(x)",
    lambda x, p: _logmean_sq(x) / math.sqrt(x),
)
_register(
    "quarter_shifted_geom",
    "(sqrt x - 1)^2 / 4 + sqrt(x)",
    lambda x, p: 0.25 * (math.sqrt(x) - 1.0) ** 2 + math.sqrt(x),
)
_register(
    "quarter_shifted_logmean",
    "(sqrt x - 1)^2 / 4 + L",
    lambda x, p: 0.25 * (math.sqrt(x) - 1.0) ** 2 + _logmean(x),
)
_register(
    "pp_shifted_logmean",
    "p(1-p)(sqrt x - 1)^2 + L",
    lambda x, p: p * (1.0 - p) * (math.sqrt(x) - 1.0) ** 2 + _logmean(x),
)
_register(
    "specht_geom", "S(x) * geometric mean", lambda x, p: sm.specht(x) * math.sqrt(x)
)
_register(
    "specht_logmean", "S(x) * logarithmic mean", lambda x, p: sm.specht(x) * _logmean(x)
)
_register(
    "kant_sqrt_geom",
    "K(sqrt x) * sqrt(x)",
    lambda x, p: sm.kantorovich(math.sqrt(x)) * math.sqrt(x),
)
_register(
    "kant_sqrt_logmean",
    "K(sqrt x) * logarithmic mean",
    lambda x, p: sm.kantorovich(math.sqrt(x)) * _logmean(x),
)
_register(
    "specht_sqrt_geom",
    "S(sqrt x) * sqrt(x)",
    lambda x, p: sm.specht(math.sqrt(x)) * math.sqrt(x),
)
_register(
    "kant_pow_logmean",
    "K(x)^{p(1-p)} * logarithmic mean",
    lambda x, p: sm.kantorovich(x) ** (p * (1.0 - p)) * _logmean(x),
)
_register(
    "kinv_wyd",
    "K(x)^{-p(1-p)} * WYD function",
    lambda x, p: sm.kantorovich(x) ** (-p * (1.0 - p)) * sm.wyd(p, x, 1.0),
)
_register(
    "ghat",
    "geometric-type bound of the logarithmic mean",
    lambda x, p: sm.geometric_bound(p, x, 1.0),
)
_register(
    "ahat",
    "arithmetic-type bound of the logarithmic mean",
    lambda x, p: sm.arithmetic_bound(p, x, 1.0),
)
_register(
    "lgap_low",
    "(L^2 - G^2) / (2 L^2)",
    lambda x, p: (_logmean_sq(x) - x) / (2.0 * _logmean_sq(x)),
)
_register(
    "lgap_mid",
    "(A - L) / L",
    lambda x, p: (sm.arithmetic_mean(x, 1.0) - _logmean(x)) / _logmean(x),
)
_register("log_kant", "log K(x)", lambda x, p: math.log(sm.kantorovich(x)))
_register(
    "lgap_mid_alt",
    "1 - (x+1) log x / (2(x-1)) + log K(x), written as 1 - A/L + log K",
    lambda x, p: 1.0
    - sm.arithmetic_mean(x, 1.0) / _logmean(x)
    + math.log(sm.kantorovich(x)),
)
_register(
    "lgap_low_alt",
    "1 - x (log x)^2 / (x-1)^2 + 2 log(4x/(x+1)^2), written as 1 - G^2/L^2 - 2 log K",
    lambda x, p: 1.0 - x / _logmean_sq(x) - 2.0 * math.log(sm.kantorovich(x)),
)
_register("zero", "constant 0", lambda x, p: 0.0)
_register(
    "cube_harm", "H(x, x^p)^3", lambda x, p: sm.harmonic_mean(x, x**p) ** 3
)
_register(
    "cube_cross",
    "x^{p+1} * A(x, x^p)",
    lambda x, p: x ** (p + 1.0) * sm.arithmetic_mean(x, x**p),
)
_register(
    "cube_logmean", "L(x, x^p)^3", lambda x, p: sm.log_mean(x, x**p) ** 3
)
_register(
    "cand_kxp_logmean", "K(x^p) * L", lambda x, p: sm.kantorovich(x**p) * _logmean(x)
)
_register(
    "cand_sxp_logmean", "S(x^p) * L", lambda x, p: sm.specht(x**p) * _logmean(x)
)
_register(
    "cand_kxpp_logmean",
    "K(x^{p(1-p)}) * L",
    lambda x, p: sm.kantorovich(x ** (p * (1.0 - p))) * _logmean(x),
)
_register(
    "specht_pow_logmean",
    "S(x)^{p(1-p)} * L",
    lambda x, p: sm.specht(x) ** (p * (1.0 - p)) * _logmean(x),
)
_register("lnt_neg", "deformed logarithm at -t (t = p)", lambda x, p: sm.t_logarithm(-p, x))
_register("logx", "natural logarithm of x", lambda x, p: math.log(x))
_register("lnt_pos", "deformed logarithm at +t (t = p)", lambda x, p: sm.t_logarithm(p, x))

EXPRESSIONS: dict[str, MeanExpr] = dict(_E)


def evaluate(expr: MeanExpr, x: float, p: float) -> float:
    """Evaluate a catalog expression, rejecting non-finite outcomes."""
    value = expr(x, p)
    if not math.isfinite(value):
        raise EvaluationError(
            f"expression {expr.tag!r} is singular at (x={x!r}, p={p!r}): {value!r}"
        )
    return value


@dataclass(frozen=True)
class InequalityCase:
    """A pairwise inequality ``lhs <= rhs`` with its validity region and status."""

    name: str
    lhs: MeanExpr
    rhs: MeanExpr
    region: Callable[[float, float], bool] = field(compare=False)
    p_intervals: tuple[tuple[float, float], ...]
    status: str  # proven | false | open
    description: str

    def gap(self, x: float, p: float) -> float:
        """Signed gap lhs - rhs; positive values are violations."""
        return evaluate(self.lhs, x, p) - evaluate(self.rhs, x, p)


def _p_in_unit(x: float, p: float) -> bool:
    return 0.0 <= p <= 1.0


def _p_in_half(x: float, p: float) -> bool:
    return 0.0 <= p <= 0.5


_CASE_SPECS = [
    # (name, lhs, rhs, region, p_intervals, status, description)
    ("basic_h_le_g", "harm", "geom", _p_in_unit, ((0.0, 1.0),), "proven",
     "harmonic mean below geometric mean"),
    ("basic_g_le_l", "geom", "logmean", _p_in_unit, ((0.0, 1.0),), "proven",
     "geometric mean below logarithmic mean"),
    ("basic_l_le_wp", "logmean", "wyd", _p_in_unit, ((0.0, 1.0),), "proven",
     "logarithmic mean below the WYD function for 0 <= p <= 1"),
    ("basic_wp_le_whalf", "wyd", "wyd_half", _p_in_unit, ((0.0, 1.0),), "proven",
     "WYD function maximal at p = 1/2"),
    ("basic_whalf_le_a", "wyd_half", "arith", _p_in_unit, ((0.0, 1.0),), "proven",
     "p = 1/2 WYD value below the arithmetic mean"),
    ("wp_le_lsq", "wyd", "logmean_sq", lambda x, p: x >= 1.0 and 0.0 <= p <= 1.0,
     ((0.0, 1.0),), "proven", "WYD below L^2 for x >= 1"),
    ("lsq_le_wp", "logmean_sq", "wyd", lambda x, p: x <= 1.0 and 0.0 <= p <= 1.0,
     ((0.0, 1.0),), "proven", "WYD above L^2 for 0 < x <= 1"),
    ("hh_low_le_wp", "hh_lower", "wyd", lambda x, p: x >= 1.0 and 0.0 <= p <= 1.0,
     ((0.0, 1.0),), "proven", "trapezoidal lower bound on WYD, x >= 1"),
    ("wp_le_hh_up", "wyd", "hh_upper", lambda x, p: x >= 1.0 and 0.0 <= p <= 1.0,
     ((0.0, 1.0),), "proven", "midpoint upper bound on WYD, x >= 1"),
    ("hh_low_le_wp_smallx", "hh_lower", "wyd",
     lambda x, p: x <= 1.0 and 0.0 <= p <= 1.0, ((0.0, 1.0),), "proven",
     "trapezoidal lower bound on WYD, 0 < x <= 1 (the sandwich keeps its "
     "orientation there; only the integrand bounds flip sign)"),
    ("wp_le_hh_up_smallx", "wyd", "hh_upper",
     lambda x, p: x <= 1.0 and 0.0 <= p <= 1.0, ((0.0, 1.0),), "proven",
     "midpoint upper bound on WYD, 0 < x <= 1"),
    ("quarter_wp_le_whalf", "wyd", "wyd_half", _p_in_unit, ((0.0, 1.0),), "proven",
     "first link of the r >= 1/4 shifted-geometric chain"),
    ("quarter_whalf_le_shifted_geom", "wyd_half", "quarter_shifted_geom", _p_in_unit,
     ((0.0, 1.0),), "proven",
     "((sqrt x + 1)/2)^2 below (sqrt x - 1)^2/4 + sqrt x (equality at r = 1/4)"),
    ("quarter_shifted_geom_le_shifted_logmean", "quarter_shifted_geom",
     "quarter_shifted_logmean", _p_in_unit, ((0.0, 1.0),), "proven",
     "replacing sqrt x by the logarithmic mean only increases the bound"),
    ("diff_wp_le_shifted_logmean", "wyd", "pp_shifted_logmean", _p_in_unit,
     ((0.0, 1.0),), "proven",
     "difference-type reverse bound W_p <= p(1-p)(sqrt x - 1)^2 + L"),
    ("diff_shifted_logmean_le_a", "pp_shifted_logmean", "arith", _p_in_unit,
     ((0.0, 1.0),), "proven",
     "the difference-type bound stays below the arithmetic mean"),
    ("specht_wp_le_whalf", "wyd", "wyd_half", _p_in_unit, ((0.0, 1.0),), "proven",
     "first link of the Specht-ratio chain"),
    ("specht_whalf_le_a", "wyd_half", "arith", _p_in_unit, ((0.0, 1.0),), "proven",
     "second link of the Specht-ratio chain"),
    ("specht_a_le_sg", "arith", "specht_geom", _p_in_unit, ((0.0, 1.0),), "proven",
     "arithmetic mean below S(x) times geometric mean"),
    ("specht_sg_le_sl", "specht_geom", "specht_logmean", _p_in_unit, ((0.0, 1.0),),
     "proven", "S(x) G below S(x) L"),
    ("kant_wp_le_whalf", "wyd", "wyd_half", _p_in_unit, ((0.0, 1.0),), "proven",
     "first link of the Kantorovich chain"),
    ("kant_whalf_eq_geom", "wyd_half", "kant_sqrt_geom", _p_in_unit, ((0.0, 1.0),),
     "proven", "identity ((sqrt x + 1)/2)^2 = K(sqrt x) sqrt x (zero gap)"),
    ("kant_geom_le_logmean", "kant_sqrt_geom", "kant_sqrt_logmean", _p_in_unit,
     ((0.0, 1.0),), "proven", "K(sqrt x) sqrt x below K(sqrt x) L"),
    ("specht_sqrt_le_whalf", "specht_sqrt_geom", "wyd_half", _p_in_unit,
     ((0.0, 1.0),), "proven",
     "S(sqrt x) sqrt x below ((sqrt x + 1)/2)^2; the Specht analogue of the "
     "Kantorovich identity reverses"),
    ("ratio_wp_le_kpl", "wyd", "kant_pow_logmean", _p_in_unit, ((0.0, 1.0),),
     "proven", "ratio-type reverse bound W_p <= K(x)^{p(1-p)} L"),
    ("lgap_low_le_mid", "lgap_low", "lgap_mid", _p_in_unit, ((0.0, 1.0),), "proven",
     "(L^2 - G^2)/(2L^2) below (A - L)/L"),
    ("lgap_mid_le_logk", "lgap_mid", "log_kant", _p_in_unit, ((0.0, 1.0),), "proven",
     "(A - L)/L below log K(x)"),
    ("lgap_mid_le_logk_alt", "zero", "lgap_mid_alt", _p_in_unit, ((0.0, 1.0),),
     "proven", "equivalent form: 1 - (x+1) log x / (2(x-1)) + log K(x) >= 0"),
    ("lgap_low_le_logk_alt", "lgap_low_alt", "zero", _p_in_unit, ((0.0, 1.0),),
     "proven", "equivalent form: 1 - x (log x)^2/(x-1)^2 + 2 log(4x/(x+1)^2) <= 0"),
    ("ahat_le_wp_smallp", "ahat", "wyd", _p_in_half, ((0.0, 0.5),), "proven",
     "arithmetic-type bound below WYD for p in [0, 1/2]"),
    ("wp_le_ahat_outside", "wyd", "ahat", lambda x, p: p <= 0.0 or p >= 0.5,
     ((-1.0, 0.0), (0.5, 2.0)), "proven",
     "WYD below the arithmetic-type bound for p outside (0, 1/2)"),
    ("kinvw_le_ghat_smallp", "kinv_wyd", "ghat", _p_in_half, ((0.0, 0.5),), "proven",
     "K^{-p(1-p)} W_p below the geometric-type bound for p in [0, 1/2]"),
    ("ghat_le_kinvw_outside", "ghat", "kinv_wyd",
     lambda x, p: -2.0 <= p <= 0.0 or 1.0 <= p <= 2.0, ((-1.0, 0.0), (1.0, 2.0)),
     "proven", "geometric-type bound below K^{-p(1-p)} W_p for p <= 0 or p >= 1"),
    ("combined_kinvw_le_ghat", "kinv_wyd", "ghat", _p_in_half, ((0.0, 0.5),),
     "proven", "first link of the combined two-sided chain around L"),
    ("combined_ghat_le_l", "ghat", "logmean", _p_in_half, ((0.0, 0.5),), "proven",
     "geometric-type bound below the logarithmic mean"),
    ("combined_l_le_ahat", "logmean", "ahat", _p_in_half, ((0.0, 0.5),), "proven",
     "logarithmic mean below the arithmetic-type bound"),
    ("combined_ahat_le_wp", "ahat", "wyd", _p_in_half, ((0.0, 0.5),), "proven",
     "last link of the combined two-sided chain around L"),
    ("cube_h_le_cross", "cube_harm", "cube_cross", lambda x, p: p <= 1.0,
     ((-1.0, 1.0),), "proven", "H(x, x^p)^3 below x^{p+1} A(x, x^p) for p <= 1"),
    ("cube_cross_le_l", "cube_cross", "cube_logmean", lambda x, p: p <= 1.0,
     ((-1.0, 1.0),), "proven", "x^{p+1} A(x, x^p) below L(x, x^p)^3 for p <= 1"),
    ("cand_k_xp", "wyd", "cand_kxp_logmean", _p_in_unit, ((0.0, 1.0),), "false",
     "tentative bound W_p <= K(x^p) L; counterexamples exist"),
    ("cand_s_xp", "wyd", "cand_sxp_logmean", _p_in_unit, ((0.0, 1.0),), "false",
     "tentative bound W_p <= S(x^p) L; counterexamples exist"),
    ("cand_k_xpp", "wyd", "cand_kxpp_logmean", _p_in_unit, ((0.0, 1.0),), "false",
     "tentative bound W_p <= K(x^{p(1-p)}) L; counterexamples exist"),
    ("cand_s_ratio", "wyd", "specht_pow_logmean", _p_in_unit, ((0.0, 1.0),), "open",
     "undecided bound W_p <= S(x)^{p(1-p)} L; no counterexample known"),
    ("lnt_low_le_log", "lnt_neg", "logx", lambda x, p: p > 0.0, ((0.0, 2.0),),
     "proven", "deformed logarithm at -t stays below log x for t > 0"),
    ("log_le_lnt_up", "logx", "lnt_pos", lambda x, p: p > 0.0, ((0.0, 2.0),),
     "proven", "log x stays below the deformed logarithm at +t for t > 0"),
]

_CATALOG: tuple[InequalityCase, ...] = tuple(
    InequalityCase(
        name=name,
        lhs=_E[lhs],
        rhs=_E[rhs],
        region=region,
        p_intervals=p_intervals,
        status=status,
        description=description,
    )
    for name, lhs, rhs, region, p_intervals, status, description in _CASE_SPECS
)
_BY_NAME = {case.name: case for case in _CATALOG}


def builtin_catalog() -> tuple[InequalityCase, ...]:
    """All built-in pairwise inequality cases, in a fixed order."""
    return _CATALOG


def shifted_chain_cases(r: float = 0.25) -> tuple[InequalityCase, ...]:
    """The shifted-geometric chain with shift coefficient r >= 1/4.

    Three pairwise links of
    W_p <= ((sqrt x + 1)/2)^2 <= r(sqrt x - 1)^2 + sqrt x
        <= r(sqrt x - 1)^2 + L; the middle link is an identity at r = 1/4.
    The built-in catalog carries the r = 1/4 instance under the
    ``quarter_*`` names.
    """
    if not (math.isfinite(r) and r >= 0.25):
        raise ConfigError(f"the chain requires r >= 1/4, got {r!r}")
    shifted_geom = MeanExpr(
        f"shifted_geom[r={r:g}]",
        f"{r:g} (sqrt x - 1)^2 + sqrt(x)",
        lambda x, p: r * (math.sqrt(x) - 1.0) ** 2 + math.sqrt(x),
    )
    shifted_logmean = MeanExpr(
        f"shifted_logmean[r={r:g}]",
        f"{r:g} (sqrt x - 1)^2 + L",
        lambda x, p: r * (math.sqrt(x) - 1.0) ** 2 + _logmean(x),
    )
    links = [
        (f"rshift_wp_le_whalf[r={r:g}]", _E["wyd"], _E["wyd_half"]),
        (f"rshift_whalf_le_geom[r={r:g}]", _E["wyd_half"], shifted_geom),
        (f"rshift_geom_le_logmean[r={r:g}]", shifted_geom, shifted_logmean),
    ]
    return tuple(
        InequalityCase(
            name=name,
            lhs=lhs,
            rhs=rhs,
            region=_p_in_unit,
            p_intervals=((0.0, 1.0),),
            status="proven",
            description=f"shifted-geometric chain link at r = {r:g}",
        )
        for name, lhs, rhs in links
    )


def case_names() -> list[str]:
    return [case.name for case in _CATALOG]


def lookup(name: str) -> InequalityCase:
    try:
        return _BY_NAME[name]
    except KeyError:
        raise KeyError(
            f"unknown case {name!r}; valid names: {', '.join(case_names())}"
        ) from None


@dataclass(frozen=True)
class GridSpec:
    """Rectangular scan grid: log-spaced in x, linear in p."""

    x_min: float
    x_max: float
    x_points: int
    p_min: float
    p_max: float
    p_points: int
    tolerance: float = DEFAULT_TOLERANCE
    x_scale: str = "log"

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x_min) and self.x_min > 0):
            raise ConfigError(f"x_min must be positive, got {self.x_min!r}")
        if self.x_min > self.x_max:
            raise ConfigError("x_min must not exceed x_max")
        if self.x_points < 1:
            raise ConfigError("x_points must be >= 1")
        if self.x_min < self.x_max and self.x_points < 2:
            raise ConfigError("x_points must be >= 2 for a non-degenerate x range")
        if self.p_min > self.p_max:
            raise ConfigError("p_min must not exceed p_max")
        if self.p_points < 1:
            raise ConfigError("p_points must be >= 1")
        if self.p_min < self.p_max and self.p_points < 2:
            raise ConfigError("p_points must be >= 2 for a non-degenerate p range")
        if not (math.isfinite(self.tolerance) and self.tolerance > 0):
            raise ConfigError("tolerance must be positive")
        if self.x_scale != "log":
            raise ConfigError("only log x spacing is supported")

    def x_values(self) -> list[float]:
        if self.x_points == 1 or self.x_min == self.x_max:
            return [self.x_min]
        return [
            float(v)
            for v in np.logspace(
                math.log10(self.x_min), math.log10(self.x_max), self.x_points
            )
        ]

    def p_values(self) -> list[float]:
        if self.p_points == 1 or self.p_min == self.p_max:
            return [self.p_min]
        return [float(v) for v in np.linspace(self.p_min, self.p_max, self.p_points)]

    def size(self) -> int:
        return len(self.x_values()) * len(self.p_values())

    def to_json_dict(self) -> dict:
        return {
            "x_min": self.x_min,
            "x_max": self.x_max,
            "x_points": self.x_points,
            "p_min": self.p_min,
            "p_max": self.p_max,
            "p_points": self.p_points,
            "tolerance": self.tolerance,
            "x_scale": self.x_scale,
        }


def _p_hull(case: InequalityCase) -> tuple[float, float]:
    los = [lo for lo, _ in case.p_intervals]
    his = [hi for _, hi in case.p_intervals]
    return min(los), max(his)


def default_grid(
    case: InequalityCase,
    x_min: float = DEFAULT_X_RANGE[0],
    x_max: float = DEFAULT_X_RANGE[1],
    x_points: int = DEFAULT_X_POINTS,
    p_points: int = DEFAULT_P_POINTS,
    tolerance: float = DEFAULT_TOLERANCE,
    p_min: Optional[float] = None,
    p_max: Optional[float] = None,
) -> GridSpec:
    """The standard verification grid for a case, p spanning its region hull."""
    hull_lo, hull_hi = _p_hull(case)
    return GridSpec(
        x_min=x_min,
        x_max=x_max,
        x_points=x_points,
        p_min=hull_lo if p_min is None else p_min,
        p_max=hull_hi if p_max is None else p_max,
        p_points=p_points,
        tolerance=tolerance,
    )


@dataclass(frozen=True)
class ViolationReport:
    """Outcome of a grid verification run.

    ``max_signed_gap`` is the raw gap lhs - rhs at the point maximizing the
    scale-relative gap; ``passed`` holds iff that relative gap is within the
    grid tolerance, which bounds the relative gap at every scanned point.
    """

    case: str
    grid: GridSpec
    max_signed_gap: float
    argmax: tuple[float, float]
    passed: bool
    samples: int
    skipped: int

    def to_json_dict(self) -> dict:
        return {
            "case": self.case,
            "grid": self.grid.to_json_dict(),
            "max_signed_gap": self.max_signed_gap,
            "argmax": {"x": self.argmax[0], "p": self.argmax[1]},
            "pass": self.passed,
            "samples": self.samples,
            "skipped": self.skipped,
        }


def _scaled_gap(case: InequalityCase, x: float, p: float) -> tuple[float, float]:
    lhs = evaluate(case.lhs, x, p)
    rhs = evaluate(case.rhs, x, p)
    gap = lhs - rhs
    return gap / max(1.0, abs(lhs), abs(rhs)), gap


def verify(case: InequalityCase, grid: GridSpec) -> ViolationReport:
    """Scan the grid and report the worst relative gap of ``lhs <= rhs``.

    Points outside the case region are counted as skipped.  The scan order is
    x-major with both axes ascending, and ties keep the first (smallest x,
    then smallest p) maximizer, so the outcome is order-deterministic.
    """
    best_scaled = -math.inf
    best_gap = 0.0
    best_at = (math.nan, math.nan)
    samples = 0
    skipped = 0
    for x in grid.x_values():
        for p in grid.p_values():
            if not case.region(x, p):
                skipped += 1
                continue
            scaled, gap = _scaled_gap(case, x, p)
            samples += 1
            if scaled > best_scaled:
                best_scaled = scaled
                best_gap = gap
                best_at = (x, p)
    if samples == 0:
        raise VacuousRegionError(
            f"grid does not intersect the region of case {case.name!r}"
        )
    return ViolationReport(
        case=case.name,
        grid=grid,
        max_signed_gap=best_gap,
        argmax=best_at,
        passed=best_scaled <= grid.tolerance,
        samples=samples,
        skipped=skipped,
    )


@dataclass(frozen=True)
class SharpnessReport:
    """Minimal |gap| over a grid and where it is attained."""

    case: str
    grid: GridSpec
    min_abs_gap: float
    argmin: tuple[float, float]
    samples: int
    skipped: int


def sharpness(case: InequalityCase, grid: GridSpec) -> SharpnessReport:
    """Locate where an inequality is tight (smallest scale-relative |gap|)."""
    best_scaled = math.inf
    best_gap = 0.0
    best_at = (math.nan, math.nan)
    samples = 0
    skipped = 0
    for x in grid.x_values():
        for p in grid.p_values():
            if not case.region(x, p):
                skipped += 1
                continue
            scaled, gap = _scaled_gap(case, x, p)
            samples += 1
            if abs(scaled) < best_scaled:
                best_scaled = abs(scaled)
                best_gap = abs(gap)
                best_at = (x, p)
    if samples == 0:
        raise VacuousRegionError(
            f"grid does not intersect the region of case {case.name!r}"
        )
    return SharpnessReport(
        case=case.name,
        grid=grid,
        min_abs_gap=best_gap,
        argmin=best_at,
        samples=samples,
        skipped=skipped,
    )


@dataclass(frozen=True)
class SearchConfig:
    """Budgeted coarse-grid plus golden-section counterexample search.

    The whole procedure is deterministic; the seed is carried into reports so
    runs remain reproducible when randomized configurations are added on top.
    """

    case: InequalityCase
    coarse: GridSpec
    budget: int = 1_000_000
    seed: int = 0
    refine_iters: int = 48
    refine_passes: int = 3

    def __post_init__(self) -> None:
        if self.budget < self.coarse.size():
            raise ConfigError(
                f"budget {self.budget} is smaller than the coarse grid "
                f"({self.coarse.size()} points)"
            )
        if self.refine_iters < 0 or self.refine_passes < 0:
            raise ConfigError("refinement caps must be non-negative")


@dataclass(frozen=True)
class SearchResult:
    """Best violation candidate found by a search."""

    case: str
    found: bool
    x: float
    p: float
    gap: float
    rel_gap: float
    evaluations: int
    seed: int

    def to_json_dict(self) -> dict:
        if self.found:
            return {"found": True, "x": self.x, "p": self.p, "gap": self.gap}
        return {"found": False, "max_gap": self.rel_gap}


def default_search_config(
    case: InequalityCase,
    budget: int = 1_000_000,
    seed: int = 0,
    x_min: float = 1e-6,
    x_max: float = 1e6,
    x_points: int = 512,
    p_points: int = 129,
    tolerance: float = 1e-8,
) -> SearchConfig:
    hull_lo, hull_hi = _p_hull(case)
    coarse = GridSpec(
        x_min=x_min,
        x_max=x_max,
        x_points=x_points,
        p_min=hull_lo,
        p_max=hull_hi,
        p_points=p_points,
        tolerance=tolerance,
    )
    return SearchConfig(case=case, coarse=coarse, budget=budget, seed=seed)


class _Budget:
    __slots__ = ("used", "limit")

    def __init__(self, limit: int) -> None:
        self.used = 0
        self.limit = limit

    def spend(self) -> bool:
        if self.used >= self.limit:
            return False
        self.used += 1
        return True


def _golden_max(
    fn: Callable[[float], tuple[float, float]],
    lo: float,
    hi: float,
    iters: int,
    budget: _Budget,
) -> tuple[float, float, float]:
    """Golden-section maximization on [lo, hi], budget-capped.

    ``fn`` returns (objective, payload); the result is (argmax, objective,
    payload) over all probes made.
    """
    best = (lo, -math.inf, math.nan)
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    if not budget.spend():
        return best
    fc = fn(c)
    if fc[0] > best[1]:
        best = (c, fc[0], fc[1])
    if not budget.spend():
        return best
    fd = fn(d)
    if fd[0] > best[1]:
        best = (d, fd[0], fd[1])
    for _ in range(iters):
        if fc[0] >= fd[0]:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            if not budget.spend():
                break
            fc = fn(c)
            if fc[0] > best[1]:
                best = (c, fc[0], fc[1])
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            if not budget.spend():
                break
            fd = fn(d)
            if fd[0] > best[1]:
                best = (d, fd[0], fd[1])
    return best


def search_counterexample(cfg: SearchConfig) -> SearchResult:
    """Maximize the relative gap of a case over its region.

    A coarse scan of the configured grid is followed by coordinate-wise
    golden-section refinement (on log x, then on p) around the best coarse
    point.  The refinement never leaves the coarse bounding box and the total
    number of gap evaluations never exceeds the budget.
    """
    case = cfg.case
    budget = _Budget(cfg.budget)
    xs = cfg.coarse.x_values()
    ps = cfg.coarse.p_values()

    best_scaled = -math.inf
    best_gap = 0.0
    best_x = math.nan
    best_p = math.nan
    for x in xs:
        for p in ps:
            if not case.region(x, p):
                continue
            if not budget.spend():
                break
            scaled, gap = _scaled_gap(case, x, p)
            if scaled > best_scaled:
                best_scaled, best_gap, best_x, best_p = scaled, gap, x, p
    if not math.isfinite(best_x):
        raise VacuousRegionError(
            f"coarse grid does not intersect the region of case {case.name!r}"
        )

    # refinement brackets: one coarse spacing to each side, clipped to the box
    lx_lo, lx_hi = math.log(cfg.coarse.x_min), math.log(cfg.coarse.x_max)
    dx = (lx_hi - lx_lo) / max(1, len(xs) - 1) if len(xs) > 1 else 0.0
    p_lo, p_hi = cfg.coarse.p_min, cfg.coarse.p_max
    dp = (p_hi - p_lo) / max(1, len(ps) - 1) if len(ps) > 1 else 0.0

    cur_x, cur_p = best_x, best_p
    for _ in range(cfg.refine_passes):
        if dx > 0.0:
            lo = max(lx_lo, math.log(cur_x) - dx)
            hi = min(lx_hi, math.log(cur_x) + dx)

            def along_x(t: float) -> tuple[float, float]:
                x = math.exp(t)
                if not case.region(x, cur_p):
                    return -math.inf, math.nan
                return _scaled_gap(case, x, cur_p)

            t, v, raw = _golden_max(along_x, lo, hi, cfg.refine_iters, budget)
            if v > best_scaled:
                best_scaled, best_gap = v, raw
                cur_x = math.exp(t)
                best_x, best_p = cur_x, cur_p
        if dp > 0.0:
            lo = max(p_lo, cur_p - dp)
            hi = min(p_hi, cur_p + dp)

            def along_p(t: float) -> tuple[float, float]:
                if not case.region(cur_x, t):
                    return -math.inf, math.nan
                return _scaled_gap(case, cur_x, t)

            t, v, raw = _golden_max(along_p, lo, hi, cfg.refine_iters, budget)
            if v > best_scaled:
                best_scaled, best_gap = v, raw
                cur_p = t
                best_x, best_p = cur_x, cur_p

    return SearchResult(
        case=case.name,
        found=best_scaled > cfg.coarse.tolerance,
        x=best_x,
        p=best_p,
        gap=best_gap,
        rel_gap=best_scaled,
        evaluations=budget.used,
        seed=cfg.seed,
    )


@dataclass(frozen=True)
class NoOrderingReport:
    """Opposite-sign witnesses for the gap ghat - K^{-p(1-p)} wyd at fixed p."""

    p: float
    positive: Optional[tuple[float, float]]  # (x, gap) with gap > 0
    negative: Optional[tuple[float, float]]  # (x, gap) with gap < 0

    @property
    def found(self) -> bool:
        return self.positive is not None and self.negative is not None


def no_ordering_witness(p: float, grid: GridSpec) -> NoOrderingReport:
    """Exhibit that neither side dominates for 1/2 < p < 1.

    Scans the grid's x values at fixed p and returns the strongest witness of
    each sign of geometric_bound(p, x, 1) - K(x)^{-p(1-p)} wyd(p, x, 1).
    """
    if not 0.5 < p < 1.0:
        raise sm.DomainError(f"p must lie strictly inside (1/2, 1), got {p!r}")
    ghat = _E["ghat"]
    kinv = _E["kinv_wyd"]
    pos: Optional[tuple[float, float]] = None
    neg: Optional[tuple[float, float]] = None
    for x in grid.x_values():
        gap = evaluate(ghat, x, p) - evaluate(kinv, x, p)
        if gap > 0.0 and (pos is None or gap > pos[1]):
            pos = (x, gap)
        if gap < 0.0 and (neg is None or gap < neg[1]):
            neg = (x, gap)
    return NoOrderingReport(p=p, positive=pos, negative=neg)


def emit_csv(case: InequalityCase, grid: GridSpec, sink) -> int:
    """Write `x,p,lhs,rhs,gap` rows for every in-region grid point.

    Numbers are printed with 17 significant digits; rows are x-major with
    both axes ascending.  Returns the number of data rows written.
    """

    def write(text: str) -> None:
        try:
            sink.write(text)
        except TypeError:
            sink.write(text.encode("ascii"))

    write("x,p,lhs,rhs,gap\n")
    rows = 0
    for x in grid.x_values():
        for p in grid.p_values():
            if not case.region(x, p):
                continue
            lhs = evaluate(case.lhs, x, p)
            rhs = evaluate(case.rhs, x, p)
            write(
                f"{x:.17g},{p:.17g},{lhs:.17g},{rhs:.17g},{lhs - rhs:.17g}\n"
            )
            rows += 1
    return rows


def json_text(value) -> str:
    """Serialize to JSON with floats rendered at 17 significant digits."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "null"
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"cannot serialize non-finite float {value!r}")
        return format(value, ".17g")
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        out = io.StringIO()
        out.write('"')
        for ch in value:
            if ch in ('"', "\\"):
                out.write("\\" + ch)
            elif ch < " ":
                out.write(f"\\u{ord(ch):04x}")
            else:
                out.write(ch)
        out.write('"')
        return out.getvalue()
    if isinstance(value, dict):
        inner = ", ".join(f"{json_text(str(k))}: {json_text(v)}" for k, v in value.items())
        return "{" + inner + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(json_text(v) for v in value) + "]"
    raise TypeError(f"cannot serialize {type(value).__name__} to JSON")
