"""Two-step efficient GMM for one endogenous regressor."""

from typing import Optional, Sequence

import numpy as np
from linearmodels.iv import IVGMM
from scipy import stats

from models import DataError, IvGmmFit

from .base import add_constant, require_full_rank


def _column_block(X, n: int, label: str) -> np.ndarray:
    if X is None:
        return np.empty((n, 0))
    X = np.asarray(X, dtype=float)
    X = X[:, None] if X.ndim == 1 else X
    if X.shape[0] != n:
        raise DataError(f"{label} has {X.shape[0]} rows, expected {n}")
    return X


def _names(prefix: str, k: int, names: Optional[Sequence[str]]) -> list[str]:
    if names is None:
        return [f"{prefix}{i}" for i in range(1, k + 1)]
    names = list(names)
    if len(names) != k:
        raise DataError(f"got {len(names)} names for {k} columns")
    return names


def _partial_out(A: np.ndarray, W: np.ndarray) -> np.ndarray:
    coef, *_ = np.linalg.lstsq(W, A, rcond=None)
    return A - W @ coef


def kleibergen_paap_lm(x_endog: np.ndarray, excluded: np.ndarray, W: np.ndarray) -> tuple[float, int, float]:
    """
    Heteroskedasticity-robust underidentification LM test for one
    endogenous regressor. Returns (statistic, df, p-value).
    """
    x = _partial_out(x_endog[:, None], W)[:, 0]
    Z = _partial_out(excluded, W)
    zx = Z.T @ x
    # Score form under the null of no first-stage relation.
    meat = (Z * (x ** 2)[:, None]).T @ Z
    stat = float(zx @ np.linalg.pinv(meat) @ zx)
    df = Z.shape[1]
    return stat, df, float(stats.chi2.sf(stat, df))


def iv_gmm(y, W_exog, x_endog, instruments,
           exog_names: Optional[Sequence[str]] = None,
           endog_name: str = "endog",
           instrument_names: Optional[Sequence[str]] = None) -> IvGmmFit:
    """
    Regress ``y`` on ``W_exog`` (plus a constant) and ``x_endog``,
    instrumenting the latter with ``instruments``.

    Two-step efficient GMM through linearmodels: 2SLS first, then the
    inverse heteroskedasticity-robust moment covariance as the weight.
    Hansen J is reported when the model is overidentified.

    Raises:
        DataError: missing values, fewer instruments than endogenous
            regressors, rank-deficient instrument matrix
    """
    y = np.asarray(y, dtype=float)
    n = len(y)
    x_endog = np.asarray(x_endog, dtype=float).reshape(-1)
    if len(x_endog) != n:
        raise DataError(f"endogenous regressor has {len(x_endog)} rows, expected {n}")
    W = add_constant(_column_block(W_exog, n, "exogenous regressors"))
    excluded = _column_block(instruments, n, "instruments")
    exog_names = ["const"] + _names("w", W.shape[1] - 1, exog_names)
    instrument_names = _names("z", excluded.shape[1], instrument_names)

    if excluded.shape[1] < 1:
        raise DataError("IV-GMM needs at least one excluded instrument for the endogenous regressor")
    if any(np.isnan(a).any() for a in (y, x_endog, W, excluded)):
        raise DataError("IV-GMM data have missing values")

    X = np.column_stack([W, x_endog])
    Z = np.column_stack([W, excluded])
    names = exog_names + [endog_name]
    require_full_rank(Z, exog_names + instrument_names, "IV-GMM instruments")
    require_full_rank(X, names, "IV-GMM regressors")

    results = IVGMM(y, W, x_endog, excluded, weight_type="robust").fit(iter_limit=2, cov_type="robust")

    overid = Z.shape[1] - X.shape[1]
    j_stat = j_df = j_p = None
    if overid > 0:
        j_stat, j_df, j_p = float(results.j_stat.stat), int(results.j_stat.df), float(results.j_stat.pval)

    kp_stat, kp_df, kp_p = kleibergen_paap_lm(x_endog, excluded, W)
    return IvGmmFit(
        names=names,
        coefficients=results.params.to_numpy(),
        std_errors=results.std_errors.to_numpy(),
        instruments=instrument_names,
        endogenous=[endog_name],
        n=n,
        kp_stat=kp_stat,
        kp_df=kp_df,
        kp_p=kp_p,
        j_stat=j_stat,
        j_df=j_df,
        j_p=j_p,
    )
