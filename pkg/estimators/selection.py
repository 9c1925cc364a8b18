"""Probit selection and Heckman outcome equations."""

import warnings
from typing import Optional, Sequence

import numpy as np
import statsmodels.api as sm
from scipy import optimize, special
from statsmodels.tools.numdiff import approx_hess
from statsmodels.tools.sm_exceptions import ConvergenceWarning, PerfectSeparationError, PerfectSeparationWarning

from models import ConvergenceError, DataError, EstimationWarning, HeckmanFit, ProbitFit, SeparationError

from .base import add_constant, covariance_from_hessian, require_full_rank, standard_errors

MIN_SELECTED = 30
SEPARATION_PROBABILITY = 1e-10
PROBIT_SCORE_TOLERANCE = 1e-8
HECKMAN_METHODS = ("two_step", "ml")


def _names(prefix: str, k: int, names: Optional[Sequence[str]]) -> list[str]:
    if names is None:
        return [f"{prefix}{i}" for i in range(1, k + 1)]
    names = list(names)
    if len(names) != k:
        raise DataError(f"got {len(names)} names for {k} columns")
    return names


def _as_matrix(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    return X[:, None] if X.ndim == 1 else X


def inverse_mills(z):
    """phi(z) / Phi(z), stable far into the left tail."""
    return np.sqrt(2.0 / np.pi) / special.erfcx(-np.asarray(z, dtype=float) / np.sqrt(2.0))


def _check_binary(y: np.ndarray, label: str) -> None:
    if np.isnan(y).any():
        raise DataError(f"{label} has missing values")
    if not np.isin(y, (0.0, 1.0)).all():
        raise DataError(f"{label} must be 0/1")


def probit_fit(X, y, names: Optional[Sequence[str]] = None, add_intercept: bool = True,
               max_iter: int = 100) -> ProbitFit:
    """
    Probit by Newton iterations.

    Raises:
        DataError: non-binary or single-class outcome, rank-deficient regressors
        SeparationError: fitted probabilities reach 0 or 1
        ConvergenceError: Newton iterations stopped before converging
    """
    X = _as_matrix(X)
    y = np.asarray(y, dtype=float)
    _check_binary(y, "probit outcome")
    if len(np.unique(y)) < 2:
        raise DataError(f"probit outcome has a single class (all {int(y[0])})")
    names = _names("x", X.shape[1], names)
    if add_intercept:
        X = add_constant(X)
        names = ["const"] + names
    if np.isnan(X).any():
        raise DataError("probit regressors have missing values")
    require_full_rank(X, names, "probit")

    model = sm.Probit(y, X)
    with warnings.catch_warnings():
        warnings.simplefilter("error", PerfectSeparationWarning)
        warnings.simplefilter("ignore", ConvergenceWarning)
        try:
            result = model.fit(method="newton", maxiter=max_iter, tol=1e-12, disp=False)
        except (PerfectSeparationError, PerfectSeparationWarning):
            raise SeparationError("perfect separation in the probit: some outcome is predicted exactly") from None

    params = np.asarray(result.params)
    index = X @ params
    probabilities = special.ndtr(index)
    if (np.any(probabilities < SEPARATION_PROBABILITY) or np.any(probabilities > 1 - SEPARATION_PROBABILITY)
            or np.any(np.abs(params) > 1e6)):
        raise SeparationError("perfect separation in the probit: coefficients diverge")
    gradient = model.score(params)
    # A run that stalls just above tol is accepted when the score is flat.
    if not result.mle_retvals.get("converged", True) and np.max(np.abs(gradient)) > PROBIT_SCORE_TOLERANCE * len(y):
        iterations = int(result.mle_retvals.get("iterations", max_iter))
        raise ConvergenceError(
            f"probit did not converge in {iterations} Newton iterations",
            {"iterations": iterations, "gradient_norm": float(np.linalg.norm(gradient))},
        )
    return ProbitFit(
        names=names,
        coefficients=params,
        std_errors=np.asarray(result.bse),
        cov=np.asarray(result.cov_params()),
        loglik=float(result.llf),
        null_loglik=float(result.llnull),
        index=index,
        gradient_norm=float(np.linalg.norm(gradient)),
        n=len(y),
    )


def _heckman_loglik(y, W, Z, s, beta, gamma, sigma, rho):
    """Per-row bivariate-normal selection log-likelihood."""
    zg = Z @ gamma
    out = special.log_ndtr(-zg)
    sel = s == 1
    r = (y[sel] - W[sel] @ beta) / sigma
    arg = (zg[sel] + rho * r) / np.sqrt(1.0 - rho ** 2)
    out[sel] = -0.5 * np.log(2 * np.pi) - np.log(sigma) - 0.5 * r ** 2 + special.log_ndtr(arg)
    return out


def _two_step(y_sel, W_sel, Z, s, probit: ProbitFit) -> dict:
    sel = s == 1
    index = probit.index
    imr = inverse_mills(index)
    W2 = np.column_stack([W_sel, imr[sel]])
    step2 = sm.OLS(y_sel, W2).fit()
    mills = float(step2.params[-1])

    delta = imr[sel] * (imr[sel] + index[sel])
    n_sel = int(sel.sum())
    sigma2 = float(step2.resid @ step2.resid / n_sel + mills ** 2 * delta.sum() / n_sel)
    sigma = np.sqrt(sigma2)
    rho = mills / sigma

    # Heckman-corrected covariance of (beta, mills).
    Z_sel = Z[sel]
    Q = rho ** 2 * ((W2.T * delta) @ Z_sel) @ probit.cov @ ((Z_sel.T * delta) @ W2)
    wtw_inv = np.linalg.inv(W2.T @ W2)
    middle = (W2.T * (1 - rho ** 2 * delta)) @ W2 + Q
    cov = sigma2 * wtw_inv @ middle @ wtw_inv
    ses = standard_errors(cov)
    return {
        "coefficients": np.asarray(step2.params[:-1]),
        "std_errors": ses[:-1],
        "mills_coef": mills,
        "mills_se": float(ses[-1]),
        "sigma": float(sigma),
        "rho": float(rho),
    }


def heckman(X_select, s, W, y, method: str = "two_step",
            select_names: Optional[Sequence[str]] = None,
            outcome_names: Optional[Sequence[str]] = None,
            max_iter: int = 1000) -> HeckmanFit:
    """
    Outcome regression of ``y`` on ``W`` corrected for selection by ``s``.

    ``X_select`` enters the probit for ``s`` on every row; ``W`` and ``y``
    are read only where s = 1 (other rows may be NaN). Intercepts are added
    to both equations.

    Raises:
        DataError: s has no unselected rows, fewer than 30 selected rows
        SeparationError: from the probit
        ConvergenceError: the ML optimizer did not converge
    """
    if method not in HECKMAN_METHODS:
        raise DataError(f"unknown Heckman method '{method}' (use {', '.join(HECKMAN_METHODS)})")
    s = np.asarray(s, dtype=float)
    _check_binary(s, "selection indicator")
    if s.all():
        raise DataError("every row is selected, the selection model is undefined")
    sel = s == 1
    if sel.sum() < MIN_SELECTED:
        raise DataError(f"Heckman needs at least {MIN_SELECTED} selected rows, got {int(sel.sum())}")

    X_select = _as_matrix(X_select)
    W = _as_matrix(W)
    y = np.asarray(y, dtype=float)
    select_names = ["const"] + _names("z", X_select.shape[1], select_names)
    outcome_names = ["const"] + _names("w", W.shape[1], outcome_names)
    if np.isnan(W[sel]).any() or np.isnan(y[sel]).any():
        raise DataError("outcome data have missing values on selected rows")

    probit = probit_fit(X_select, s, select_names[1:])
    Z = add_constant(X_select)
    W_sel = add_constant(W[sel])
    y_sel = y[sel]
    require_full_rank(W_sel, outcome_names, "Heckman outcome equation")

    exclusion = np.linalg.matrix_rank(np.column_stack([W_sel, Z[sel]])) > np.linalg.matrix_rank(W_sel)
    if not exclusion:
        warnings.warn("selection equation has no variable excluded from the outcome equation; "
                      "identification rests on the probit functional form", EstimationWarning, stacklevel=2)

    two = _two_step(y_sel, W_sel, Z, s, probit)
    common = dict(
        names=outcome_names,
        selected_n=int(sel.sum()),
        total_n=len(s),
        probit=probit,
        selection_names=select_names,
        exclusion_restriction=bool(exclusion),
    )
    if method == "two_step":
        return HeckmanFit(
            method="two_step",
            coefficients=two["coefficients"],
            std_errors=two["std_errors"],
            mills_coef=two["mills_coef"],
            mills_se=two["mills_se"],
            rho=two["rho"],
            sigma=two["sigma"],
            selection_coefficients=probit.coefficients,
            **common,
        )
    return _heckman_ml(y, W, Z, s, two, probit, common, max_iter)


def _heckman_ml(y, W, Z, s, two: dict, probit: ProbitFit, common: dict, max_iter: int) -> HeckmanFit:
    W_full = add_constant(np.nan_to_num(W))
    y_full = np.nan_to_num(y)
    kw, kz = W_full.shape[1], Z.shape[1]

    def unpack(u):
        return u[:kw], u[kw:kw + kz], np.exp(u[-2]), np.tanh(u[-1])

    def negative(u):
        beta, gamma, sigma, rho = unpack(u)
        with np.errstate(all="ignore"):
            value = -np.sum(_heckman_loglik(y_full, W_full, Z, s, beta, gamma, sigma, rho))
        return value if np.isfinite(value) else 1e10

    u0 = np.concatenate([
        two["coefficients"],
        probit.coefficients,
        [np.log(two["sigma"]), np.arctanh(np.clip(two["rho"], -0.99, 0.99))],
    ])
    result = optimize.minimize(negative, u0, method="BFGS", options={"maxiter": max_iter, "gtol": 1e-6})
    if not result.success and result.status != 2:
        raise ConvergenceError(f"Heckman ML did not converge: {result.message}",
                               {"iterations": int(result.nit), "message": str(result.message)})
    if result.status == 2:
        # Precision loss near the optimum is common with numerical gradients.
        grad = optimize.approx_fprime(result.x, negative, 1e-7)
        if np.linalg.norm(grad) > 1e-2 * max(1.0, abs(result.fun)):
            raise ConvergenceError(f"Heckman ML did not converge: {result.message}",
                                   {"iterations": int(result.nit), "message": str(result.message)})

    beta, gamma, sigma, rho = unpack(result.x)
    theta = np.concatenate([beta, gamma, [sigma, rho]])

    def natural_loglik(t):
        if not (t[-2] > 0 and abs(t[-1]) < 1):
            return np.nan
        with np.errstate(all="ignore"):
            return np.sum(_heckman_loglik(y_full, W_full, Z, s, t[:kw], t[kw:kw + kz], t[-2], t[-1]))

    cov = covariance_from_hessian(approx_hess(theta, natural_loglik), "Heckman ML")
    ses = standard_errors(cov)
    # Mills coefficient rho * sigma by the delta method.
    g = np.zeros(len(theta))
    g[-2], g[-1] = rho, sigma
    mills_se = float(np.sqrt(g @ cov @ g)) if np.all(np.isfinite(cov[-2:, -2:])) else float("nan")
    return HeckmanFit(
        method="ml",
        coefficients=beta,
        std_errors=ses[:kw],
        mills_coef=float(rho * sigma),
        mills_se=mills_se,
        rho=float(rho),
        sigma=float(sigma),
        rho_se=float(ses[-1]),
        sigma_se=float(ses[-2]),
        loglik=float(-result.fun),
        selection_coefficients=gamma,
        **common,
    )
