"""Helpers shared by the estimators."""

import warnings
from typing import Optional

import numpy as np
from scipy import stats

from models import DataError, DesignMatrix, EstimationWarning


def two_sided_p(statistic: float, df: Optional[float] = None) -> float:
    """Two-sided p-value from the normal, or from Student-t when ``df`` is given."""
    if not np.isfinite(statistic):
        return 0.0 if np.isinf(statistic) else float("nan")
    if df is None:
        return float(2 * stats.norm.sf(abs(statistic)))
    return float(2 * stats.t.sf(abs(statistic), df))


def covariance_from_hessian(hessian: np.ndarray, label: str) -> np.ndarray:
    """
    Inverse of the negative log-likelihood Hessian.

    A Hessian that is singular or not negative definite yields NaN entries
    and an EstimationWarning instead of an exception, so the point estimates
    are still reported.
    """
    k = hessian.shape[0]
    try:
        cov = np.linalg.inv(-hessian)
    except np.linalg.LinAlgError:
        warnings.warn(f"{label}: singular information matrix, standard errors unavailable",
                      EstimationWarning, stacklevel=3)
        return np.full((k, k), np.nan)
    if not np.all(np.isfinite(cov)) or np.any(np.diag(cov) <= 0):
        warnings.warn(f"{label}: information matrix is not positive definite, some standard errors unavailable",
                      EstimationWarning, stacklevel=3)
        diag = np.diag(cov).copy()
        diag[~(diag > 0)] = np.nan
        np.fill_diagonal(cov, diag)
    return cov


def standard_errors(cov: np.ndarray) -> np.ndarray:
    with np.errstate(invalid="ignore"):
        return np.sqrt(np.diag(cov))


def sandwich(hessian: np.ndarray, scores: np.ndarray) -> np.ndarray:
    """H^-1 (S'S) H^-1 from the Hessian and per-observation scores."""
    bread = np.linalg.pinv(-hessian)
    meat = scores.T @ scores
    return bread @ meat @ bread


def require_full_rank(X: np.ndarray, names: list, label: str) -> None:
    rank = np.linalg.matrix_rank(X)
    if rank < X.shape[1]:
        raise DataError(f"{label}: regressors {', '.join(map(str, names))} are rank deficient "
                        f"(rank {rank} of {X.shape[1]})")


def complete_block(design: DesignMatrix, names: list) -> np.ndarray:
    """Mask of rows complete on ``names``."""
    return ~design.incomplete_rows(names)


def add_constant(X: np.ndarray) -> np.ndarray:
    return np.column_stack([np.ones(X.shape[0]), X])
