"""Descriptive statistics, Welch/Student two-sample tests, Student-t CDF,
and multiple-regression OLS.

These primitives back both the flawed balance-check procedure and the
recommended covariate-adjusted analysis, so everything here is exact and
loud about degenerate input rather than silently returning nonsense.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import betainc

from .errors import CollinearityError, ConfigError, DataError

__all__ = [
    "DescriptiveSummary",
    "TestResult",
    "RegressionFit",
    "CorrelationMatrix",
    "describe",
    "student_t_cdf",
    "welch_t_test",
    "student_t_test",
    "ols_fit",
    "correlation_matrix",
]

RANK_TOL = 1e-10  # relative singular-value threshold for rank detection


@dataclass(frozen=True)
class DescriptiveSummary:
    """Two-group location/scale summary with a standardized mean difference.

    ``cohens_d`` is (mean_b - mean_a) / pooled_sd, or None when the pooled
    SD is zero (never infinity).
    """

    mean_a: float
    mean_b: float
    sd_a: float
    sd_b: float
    pooled_sd: float
    cohens_d: float | None
    n_a: int
    n_b: int


@dataclass(frozen=True)
class TestResult:
    """Two-sample t-test result; ``estimate`` is mean(A) - mean(B)."""

    statistic: float
    df: float
    p_value: float
    estimate: float


@dataclass(frozen=True)
class RegressionFit:
    """OLS fit: coefficient vector with SEs, t statistics and p-values."""

    coefficients: np.ndarray
    standard_errors: np.ndarray
    t_stats: np.ndarray
    p_values: np.ndarray
    residual_df: int
    sigma2: float
    residuals: np.ndarray


@dataclass(frozen=True)
class CorrelationMatrix:
    """Pearson correlations over named columns.

    Rows/columns of zero-variance inputs are NaN and their names are listed
    in ``degenerate``.
    """

    names: tuple
    values: np.ndarray
    degenerate: tuple = ()


def _sample_sd(x: np.ndarray) -> float:
    return float(np.std(x, ddof=1))


def describe(group_a, group_b) -> DescriptiveSummary:
    """Location/scale summary of two groups with pooled-SD Cohen's d."""
    a = np.asarray(group_a, dtype=float)
    b = np.asarray(group_b, dtype=float)
    if len(a) < 2 or len(b) < 2:
        raise DataError("each group needs at least 2 elements")
    sd_a, sd_b = _sample_sd(a), _sample_sd(b)
    na, nb = len(a), len(b)
    pooled = math.sqrt(((na - 1) * sd_a**2 + (nb - 1) * sd_b**2) / (na + nb - 2))
    d = (float(b.mean()) - float(a.mean())) / pooled if pooled > 0 else None
    return DescriptiveSummary(
        mean_a=float(a.mean()), mean_b=float(b.mean()),
        sd_a=sd_a, sd_b=sd_b, pooled_sd=pooled, cohens_d=d,
        n_a=na, n_b=nb,
    )


def student_t_cdf(t: float, df: float) -> float:
    """Lower-tail Student-t probability via the regularized incomplete beta."""
    if df <= 0:
        raise ConfigError("df", "must be positive")
    t = float(t)
    if t == 0.0:
        return 0.5
    x = df / (df + t * t)
    tail = 0.5 * float(betainc(df / 2.0, 0.5, x))
    return tail if t < 0 else 1.0 - tail


def _two_sided_p(t: float, df: float) -> float:
    return 2.0 * (1.0 - student_t_cdf(abs(t), df))


def _t_test(a, b, pooled: bool) -> TestResult:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if len(a) < 2 or len(b) < 2:
        raise DataError("each group needs at least 2 elements")
    na, nb = len(a), len(b)
    va, vb = np.var(a, ddof=1), np.var(b, ddof=1)
    diff = float(a.mean() - b.mean())
    if va == 0.0 and vb == 0.0:
        if diff == 0.0:
            # both groups constant and equal: no evidence of difference
            return TestResult(statistic=0.0, df=float(na + nb - 2), p_value=1.0, estimate=0.0)
        raise DataError("zero variance in both groups with unequal means")
    if va == 0.0 or vb == 0.0:
        raise DataError("zero variance in one group")
    if pooled:
        sp2 = ((na - 1) * va + (nb - 1) * vb) / (na + nb - 2)
        se = math.sqrt(sp2 * (1.0 / na + 1.0 / nb))
        df = float(na + nb - 2)
    else:
        se = math.sqrt(va / na + vb / nb)
        df = (va / na + vb / nb) ** 2 / (
            (va / na) ** 2 / (na - 1) + (vb / nb) ** 2 / (nb - 1)
        )
    t = diff / se
    return TestResult(statistic=t, df=df, p_value=_two_sided_p(t, df), estimate=diff)


def welch_t_test(group_a, group_b) -> TestResult:
    """Welch's unequal-variance t-test with Welch-Satterthwaite df, two-sided."""
    return _t_test(group_a, group_b, pooled=False)


def student_t_test(group_a, group_b) -> TestResult:
    """Classic pooled-variance two-sample t-test, two-sided."""
    return _t_test(group_a, group_b, pooled=True)


def ols_fit(design, response) -> RegressionFit:
    """Least-squares fit via QR, with classical SEs and two-sided p-values.

    ``design`` must include its own intercept column and have full column
    rank; rank deficiency raises CollinearityError naming the dependent
    columns rather than returning inflated estimates.
    """
    X = np.asarray(design, dtype=float)
    y = np.asarray(response, dtype=float)
    if X.ndim != 2:
        raise DataError("design must be a 2-D matrix")
    n, p = X.shape
    if len(y) != n:
        raise DataError("response length must match design rows")
    if n <= p:
        raise DataError(f"underdetermined system: n={n} rows for p={p} columns")

    u, s, vt = np.linalg.svd(X, full_matrices=False)
    rank = int(np.sum(s > RANK_TOL * s[0])) if s[0] > 0 else 0
    if rank < p:
        # columns loading on the null space are mutually dependent
        null_space = vt[rank:]
        dependent = np.where(np.abs(null_space).max(axis=0) > 1e-8)[0]
        raise CollinearityError(dependent.tolist())

    q, r = np.linalg.qr(X)
    beta = np.linalg.solve(r, q.T @ y)
    residuals = y - X @ beta
    df = n - p
    sigma2 = float(residuals @ residuals) / df
    r_inv = np.linalg.solve(r, np.eye(p))
    xtx_inv_diag = np.einsum("ij,ij->i", r_inv, r_inv)
    se = np.sqrt(sigma2 * xtx_inv_diag)
    with np.errstate(divide="ignore", invalid="ignore"):
        t_stats = np.where(se > 0, beta / se, np.where(beta == 0, 0.0, np.inf))
    p_values = np.array([_two_sided_p(t, df) if np.isfinite(t) else 0.0 for t in t_stats])
    return RegressionFit(
        coefficients=beta, standard_errors=se, t_stats=t_stats,
        p_values=p_values, residual_df=df, sigma2=sigma2, residuals=residuals,
    )


def correlation_matrix(columns: dict) -> CorrelationMatrix:
    """Pairwise Pearson correlations of equally long named columns."""
    names = tuple(columns.keys())
    if not names:
        raise DataError("no columns given")
    arrays = [np.asarray(columns[name], dtype=float) for name in names]
    length = len(arrays[0])
    if length < 2:
        raise DataError("columns need at least 2 rows")
    if any(len(a) != length for a in arrays):
        raise DataError("all columns must have equal length")
    degenerate = tuple(n for n, a in zip(names, arrays) if np.std(a) == 0.0)
    k = len(names)
    values = np.full((k, k), np.nan)
    for i in range(k):
        for j in range(k):
            if names[i] in degenerate or names[j] in degenerate:
                continue
            if i == j:
                values[i, j] = 1.0
            else:
                values[i, j] = float(np.corrcoef(arrays[i], arrays[j])[0, 1])
    return CorrelationMatrix(names=names, values=values, degenerate=degenerate)
