"""Operator means on real symmetric positive definite matrices.

Every mean here is a congruence S^{1/2} f(C) S^{1/2} with
C = S^{-1/2} T S^{-1/2}, so one spectral decomposition of S and one of C
suffice per pair.  The operator logarithmic mean is integrated with
Gauss-Legendre quadrature in the weight t of the weighted geometric mean;
the operator WYD function applies its scalar counterpart to the spectrum of
C, which agrees with the quadratic-form definition whenever the middle
factor is invertible and extends it continuously where C has unit
eigenvalues.

Loewner-order comparisons are certified through the smallest eigenvalue of
the difference, relative to the operator norm of the right-hand side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from . import scalar_means as sm
from .scalar_means import DomainError

__all__ = [
    "NumericError",
    "SpdMatrix",
    "SpectralDecomposition",
    "LoewnerVerdict",
    "PHalfIdentityReport",
    "spectral_decompose",
    "matrix_function",
    "weighted_geometric",
    "op_arithmetic",
    "heinz",
    "op_log_mean",
    "op_wyd",
    "loewner_leq",
    "random_spd",
    "sandwiched_pair",
    "check_p_half_identity",
    "check_wyd_diff_bound",
    "check_wyd_ratio_bound",
    "write_matrix",
    "read_matrix",
]

_SYMMETRY_RTOL = 1e-12
_DEFAULT_LOEWNER_TOL = 1e-8
_DEFAULT_QUAD_NODES = 32

MatrixLike = Union["SpdMatrix", np.ndarray]


class NumericError(RuntimeError):
    """A linear-algebra step failed its accuracy or definiteness check."""


def _symmetrize(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.T)


def _check_symmetric(m: np.ndarray, what: str) -> None:
    scale = np.abs(m).max() if m.size else 0.0
    asym = np.abs(m - m.T).max()
    if asym > _SYMMETRY_RTOL * max(scale, 1e-300):
        raise DomainError(
            f"{what} must be symmetric; max asymmetry {asym:.3e} exceeds "
            f"{_SYMMETRY_RTOL:.0e} * {scale:.3e}"
        )


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues (ascending) and orthonormal eigenvectors of a symmetric matrix."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def apply(self, fn: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
        """Q fn(lambda) Q^T, symmetrized."""
        q = self.eigenvectors
        return _symmetrize((q * fn(self.eigenvalues)) @ q.T)


class SpdMatrix:
    """A validated real symmetric positive definite matrix.

    Construction symmetrizes the entries (after checking the asymmetry is at
    rounding level), verifies positive definiteness, and caches the spectral
    decomposition.
    """

    __slots__ = ("_m", "_spec")

    def __init__(self, entries) -> None:
        m = np.array(entries, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise DomainError(f"expected a square matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise DomainError("matrix entries must be finite")
        _check_symmetric(m, "an SPD matrix")
        m = _symmetrize(m)
        m.setflags(write=False)
        self._m = m
        self._spec = spectral_decompose_array(m)
        if self._spec.eigenvalues[0] <= 0.0:
            raise DomainError(
                "matrix is not positive definite; smallest eigenvalue "
                f"{self._spec.eigenvalues[0]:.6e}"
            )

    @property
    def dim(self) -> int:
        return self._m.shape[0]

    @property
    def array(self) -> np.ndarray:
        return self._m

    def spectral(self) -> SpectralDecomposition:
        return self._spec

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return np.array(self._m, copy=True)
        return np.array(self._m, dtype=dtype, copy=True)

    def __repr__(self) -> str:
        return f"SpdMatrix(dim={self.dim})"


def spectral_decompose_array(m: np.ndarray) -> SpectralDecomposition:
    """eigh plus reconstruction and orthogonality checks."""
    try:
        w, q = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigendecomposition failed to converge: {exc}") from exc
    norm = np.linalg.norm(m)
    residual = np.linalg.norm((q * w) @ q.T - m)
    if residual > 1e-10 * max(norm, 1e-300):
        raise NumericError(
            f"spectral reconstruction residual {residual:.3e} exceeds "
            f"1e-10 * {norm:.3e}"
        )
    ortho = np.abs(q.T @ q - np.eye(m.shape[0])).max()
    if ortho > 1e-10:
        raise NumericError(f"eigenvector orthogonality defect {ortho:.3e}")
    return SpectralDecomposition(eigenvalues=w, eigenvectors=q)


def _as_spd(value: MatrixLike) -> SpdMatrix:
    if isinstance(value, SpdMatrix):
        return value
    return SpdMatrix(value)


def _require_same_dim(s: SpdMatrix, t: SpdMatrix) -> None:
    if s.dim != t.dim:
        raise DomainError(f"dimension mismatch: {s.dim} vs {t.dim}")


def spectral_decompose(m: MatrixLike) -> SpectralDecomposition:
    """Spectral decomposition of an SPD matrix, eigenvalues ascending."""
    return _as_spd(m).spectral()


def matrix_function(m: MatrixLike, fn: Callable[[float], float]) -> np.ndarray:
    """Q fn(lambda) Q^T for a scalar function of the spectrum."""
    spec = _as_spd(m).spectral()
    try:
        values = np.array([float(fn(v)) for v in spec.eigenvalues])
    except (ValueError, ZeroDivisionError, OverflowError) as exc:
        raise DomainError(f"function undefined on the spectrum: {exc}") from exc
    if not np.all(np.isfinite(values)):
        raise DomainError(
            "function produced a non-finite value on the spectrum "
            f"{spec.eigenvalues!r}"
        )
    return spec.apply(lambda w: values)


@dataclass(frozen=True)
class _PairFactors:
    """Shared factors of the congruence form S^{1/2} f(C) S^{1/2}."""

    root: np.ndarray  # S^{1/2}
    c_eigenvalues: np.ndarray  # spectrum of C = S^{-1/2} T S^{-1/2}
    c_eigenvectors: np.ndarray

    def combine(self, values: np.ndarray) -> np.ndarray:
        q = self.c_eigenvectors
        inner = _symmetrize((q * values) @ q.T)
        return _symmetrize(self.root @ inner @ self.root)


def _pair_factors(s: SpdMatrix, t: SpdMatrix) -> _PairFactors:
    spec = s.spectral()
    root = spec.apply(np.sqrt)
    inv_root = spec.apply(lambda w: 1.0 / np.sqrt(w))
    c = _symmetrize(inv_root @ t.array @ inv_root)
    c_spec = spectral_decompose_array(c)
    if c_spec.eigenvalues[0] <= 0.0:
        raise NumericError(
            "congruence-transformed matrix lost positive definiteness; "
            f"smallest eigenvalue {c_spec.eigenvalues[0]:.6e}"
        )
    return _PairFactors(
        root=root,
        c_eigenvalues=c_spec.eigenvalues,
        c_eigenvectors=c_spec.eigenvectors,
    )


def weighted_geometric(s: MatrixLike, t: MatrixLike, p: float) -> SpdMatrix:
    """Weighted geometric mean S^{1/2} (S^{-1/2} T S^{-1/2})^p S^{1/2}.

    Weight 0 returns S and weight 1 returns T exactly; p is accepted in
    [-1, 2] so Heinz-type compositions stay expressible.
    """
    s, t = _as_spd(s), _as_spd(t)
    _require_same_dim(s, t)
    if not (isinstance(p, (int, float)) and math.isfinite(p) and -1.0 <= p <= 2.0):
        raise DomainError(f"weight p must lie in [-1, 2], got {p!r}")
    if p == 0.0:
        return s
    if p == 1.0:
        return t
    factors = _pair_factors(s, t)
    return SpdMatrix(factors.combine(factors.c_eigenvalues**p))


def op_arithmetic(s: MatrixLike, t: MatrixLike) -> SpdMatrix:
    """(S + T) / 2."""
    s, t = _as_spd(s), _as_spd(t)
    _require_same_dim(s, t)
    return SpdMatrix(0.5 * (s.array + t.array))


def heinz(s: MatrixLike, t: MatrixLike, p: float) -> SpdMatrix:
    """Heinz mean (S #_p T + S #_{1-p} T) / 2; the geometric mean at p = 1/2."""
    s, t = _as_spd(s), _as_spd(t)
    _require_same_dim(s, t)
    if not (isinstance(p, (int, float)) and math.isfinite(p) and -1.0 <= p <= 2.0):
        raise DomainError(f"weight p must lie in [-1, 2], got {p!r}")
    if p == 0.5:
        return weighted_geometric(s, t, 0.5)
    factors = _pair_factors(s, t)
    lam = factors.c_eigenvalues
    return SpdMatrix(factors.combine(0.5 * (lam**p + lam ** (1.0 - p))))


def op_log_mean(
    s: MatrixLike, t: MatrixLike, nodes: int = _DEFAULT_QUAD_NODES
) -> SpdMatrix:
    """Operator logarithmic mean, the integral over [0, 1] of S #_t T dt.

    Gauss-Legendre quadrature of the given order in t; the integrand is
    entire in t, so moderate orders are already at rounding accuracy.
    """
    s, t = _as_spd(s), _as_spd(t)
    _require_same_dim(s, t)
    if not isinstance(nodes, int) or nodes < 2:
        raise DomainError(f"quadrature order must be an integer >= 2, got {nodes!r}")
    xi, wi = np.polynomial.legendre.leggauss(nodes)
    ts = 0.5 * (xi + 1.0)
    ws = 0.5 * wi
    factors = _pair_factors(s, t)
    lam = factors.c_eigenvalues
    # sum_i w_i lambda^{t_i}, vectorized over the spectrum of C
    quad = (lam[:, None] ** ts[None, :]) @ ws
    return SpdMatrix(factors.combine(quad))


def op_wyd(s: MatrixLike, t: MatrixLike, p: float) -> SpdMatrix:
    """Operator Wigner-Yanase-Dyson function for 0 < p < 1.

    Defined by the congruence-invariant form S^{1/2} W_p(C, I) S^{1/2}:
    identical to
    ``p(1-p)/2 (S-T)(S nabla T - Hz_p(S,T))^{-1}(S-T)`` whenever the middle
    factor is invertible, and extending it continuously (the scalar
    convention W_p(x, x) = x) where C has unit eigenvalues.  Equal inputs
    return S; the endpoint weights 0 and 1 are rejected because the operator
    limit is not defined.
    """
    s, t = _as_spd(s), _as_spd(t)
    _require_same_dim(s, t)
    if not (isinstance(p, (int, float)) and math.isfinite(p) and 0.0 < p < 1.0):
        raise DomainError(
            f"op_wyd requires 0 < p < 1, got {p!r}; the endpoint operator "
            "limit is undefined"
        )
    scale = max(np.abs(s.array).max(), np.abs(t.array).max())
    if np.abs(s.array - t.array).max() <= 1e-14 * scale:
        return s
    factors = _pair_factors(s, t)
    values = np.array([sm.wyd(p, float(lam), 1.0) for lam in factors.c_eigenvalues])
    return SpdMatrix(factors.combine(values))


@dataclass(frozen=True)
class LoewnerVerdict:
    """Loewner-order comparison lhs <= rhs via the spectrum of the difference."""

    holds: bool
    min_eigenvalue: float
    scale: float

    def to_json_dict(self) -> dict:
        return {
            "holds": self.holds,
            "min_eigenvalue": self.min_eigenvalue,
            "scale": self.scale,
        }


def loewner_leq(
    lhs: MatrixLike, rhs: MatrixLike, tol: float = _DEFAULT_LOEWNER_TOL
) -> LoewnerVerdict:
    """Certify lhs <= rhs in the Loewner order within a relative tolerance.

    Holds iff the smallest eigenvalue of rhs - lhs is at least
    ``-tol * ||rhs||`` with the operator norm of rhs as scale.
    """
    a = np.asarray(lhs, dtype=float)
    b = np.asarray(rhs, dtype=float)
    if a.shape != b.shape or a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError(f"shape mismatch: {a.shape} vs {b.shape}")
    _check_symmetric(a, "the left-hand side")
    _check_symmetric(b, "the right-hand side")
    diff = _symmetrize(b - a)
    min_eig = float(np.linalg.eigvalsh(diff)[0])
    scale = float(np.abs(np.linalg.eigvalsh(_symmetrize(b))).max())
    return LoewnerVerdict(
        holds=min_eig >= -tol * scale, min_eigenvalue=min_eig, scale=scale
    )


def random_spd(dim: int, condition_number: float, seed: int) -> SpdMatrix:
    """Seeded random SPD matrix with spectrum in [1, condition_number].

    The eigenvector basis comes from a sign-fixed QR of a Gaussian matrix and
    the eigenvalues are log-uniform with the interval endpoints pinned, so
    the condition number is attained exactly (up to rounding).
    """
    if not isinstance(dim, int) or dim < 1:
        raise DomainError(f"dim must be a positive integer, got {dim!r}")
    if not (math.isfinite(condition_number) and condition_number >= 1.0):
        raise DomainError(f"condition_number must be >= 1, got {condition_number!r}")
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(a)
    q = q * np.where(np.diag(r) >= 0.0, 1.0, -1.0)
    if condition_number == 1.0 or dim == 1:
        lam = np.ones(dim)
    else:
        lam = np.exp(rng.uniform(0.0, math.log(condition_number), size=dim))
        lam[0] = 1.0
        lam[-1] = condition_number
    return SpdMatrix(_symmetrize((q * lam) @ q.T))


def sandwiched_pair(
    s: MatrixLike, alpha: float, beta: float, seed: int
) -> SpdMatrix:
    """Seeded T with alpha S <= T <= beta S in the Loewner order.

    T = S^{1/2} M S^{1/2} with M symmetric and spectrum log-uniform in
    [alpha, beta]; both sandwich constraints are re-certified before
    returning.
    """
    s = _as_spd(s)
    if not (math.isfinite(alpha) and math.isfinite(beta) and 0.0 < alpha <= beta):
        raise DomainError(f"need 0 < alpha <= beta, got {alpha!r}, {beta!r}")
    if alpha == beta:
        return SpdMatrix(alpha * s.array)
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((s.dim, s.dim))
    q, r = np.linalg.qr(a)
    q = q * np.where(np.diag(r) >= 0.0, 1.0, -1.0)
    mu = np.exp(rng.uniform(math.log(alpha), math.log(beta), size=s.dim))
    m = _symmetrize((q * mu) @ q.T)
    root = s.spectral().apply(np.sqrt)
    t = SpdMatrix(_symmetrize(root @ m @ root))
    lower = loewner_leq(alpha * s.array, t.array)
    upper = loewner_leq(t.array, beta * s.array)
    if not (lower.holds and upper.holds):
        raise NumericError(
            "sandwich construction failed certification: "
            f"lower min eig {lower.min_eigenvalue:.3e}, "
            f"upper min eig {upper.min_eigenvalue:.3e}"
        )
    return t


@dataclass(frozen=True)
class PHalfIdentityReport:
    """Residual of the p = 1/2 quadratic-form identity."""

    residual: float
    scale: float
    passed: bool

    def to_json_dict(self) -> dict:
        return {"residual": self.residual, "scale": self.scale, "passed": self.passed}


def check_p_half_identity(
    s: MatrixLike, t: MatrixLike, tol: float = 1e-10
) -> PHalfIdentityReport:
    """Verify ((S-T)/2)(S nabla T + S # T)^{-1}((S-T)/2) = S nabla T - S # T.

    The residual is Frobenius-relative to the right-hand side, or absolute
    when the right-hand side vanishes (S = T).
    """
    s, t = _as_spd(s), _as_spd(t)
    _require_same_dim(s, t)
    nabla = op_arithmetic(s, t).array
    sharp = weighted_geometric(s, t, 0.5).array
    total = _symmetrize(nabla + sharp)
    total_spec = spectral_decompose_array(total)
    if total_spec.eigenvalues[0] <= 0.0:
        raise NumericError(
            "S nabla T + S # T lost positive definiteness; smallest "
            f"eigenvalue {total_spec.eigenvalues[0]:.6e}"
        )
    inv = total_spec.apply(lambda w: 1.0 / w)
    half_diff = 0.5 * (s.array - t.array)
    lhs = _symmetrize(half_diff @ inv @ half_diff)
    rhs = nabla - sharp
    scale = float(np.linalg.norm(rhs))
    residual = float(np.linalg.norm(lhs - rhs))
    if scale > 1e-14 * np.linalg.norm(nabla):
        residual /= scale
    return PHalfIdentityReport(residual=residual, scale=scale, passed=residual <= tol)


def check_wyd_diff_bound(
    s: MatrixLike, t: MatrixLike, p: float, tol: float = _DEFAULT_LOEWNER_TOL
) -> LoewnerVerdict:
    """Certify W_p(S,T) <= 2p(1-p)(S nabla T - S # T) + L(S,T)."""
    s, t = _as_spd(s), _as_spd(t)
    wyd_st = op_wyd(s, t, p).array
    nabla = op_arithmetic(s, t).array
    sharp = weighted_geometric(s, t, 0.5).array
    bound = 2.0 * p * (1.0 - p) * (nabla - sharp) + op_log_mean(s, t).array
    return loewner_leq(wyd_st, bound, tol)


def check_wyd_ratio_bound(
    s: MatrixLike,
    alpha: float,
    beta: float,
    p: float,
    seed: int,
    tol: float = _DEFAULT_LOEWNER_TOL,
) -> LoewnerVerdict:
    """Certify W_p(S,T) <= k_p L(S,T) for a seeded sandwiched T.

    ``k_p`` is the endpoint bound max(K(alpha), K(beta))^{p(1-p)}.
    """
    s = _as_spd(s)
    t = sandwiched_pair(s, alpha, beta, seed)
    kp = sm.kp_bound(alpha, beta, p)
    wyd_st = op_wyd(s, t, p).array
    log_st = op_log_mean(s, t).array
    return loewner_leq(wyd_st, kp * log_st, tol)


def write_matrix(m: MatrixLike, sink) -> None:
    """Plain-text matrix format: `dim` then dim rows, 17 significant digits."""
    arr = np.asarray(m, dtype=float)
    lines = [str(arr.shape[0])]
    lines.extend(" ".join(f"{v:.17g}" for v in row) for row in arr)
    text = "\n".join(lines) + "\n"
    try:
        sink.write(text)
    except TypeError:
        sink.write(text.encode("ascii"))


def read_matrix(source) -> np.ndarray:
    """Parse the plain-text matrix format written by write_matrix."""
    data = source.read()
    if isinstance(data, bytes):
        data = data.decode("ascii")
    tokens = data.split()
    if not tokens:
        raise DomainError("empty matrix input")
    dim = int(tokens[0])
    values = [float(tok) for tok in tokens[1:]]
    if len(values) != dim * dim:
        raise DomainError(
            f"expected {dim * dim} entries for dim {dim}, got {len(values)}"
        )
    return np.array(values).reshape(dim, dim)
