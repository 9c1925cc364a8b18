"""
Asymmetric component GARCH-in-mean: simulation, likelihood and estimation.

Mean equation:

    y_t = mu + phi_lag y_{t-1} + beta' U_t + rho' M_t + delta g(sigma2_t) + eps_t

Variance, with lag-1 timing:

    q_t       = omega + rho_q (q_{t-1} - omega) + phi_q (eps2_{t-1} - sigma2_{t-1}) + theta1' Z1_t
    sigma2_t  = q_t + alpha_s (eps2_{t-1} - q_{t-1})
                    + kappa_lev (eps2_{t-1} - q_{t-1}) d_{t-1}
                    + beta_s (sigma2_{t-1} - q_{t-1}) + theta2' Z2_t

The recursion starts from the OLS residual variance of the mean equation.
"""

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
import statsmodels.api as sm
from scipy import optimize, special
from statsmodels.tools.numdiff import approx_fprime, approx_hess

from models import (
    TRANSFORM_PREFERENCE,
    AcgarchFit,
    AcgarchParams,
    AcgarchSpec,
    AsymmetryMode,
    ConvergenceError,
    ConvergenceReport,
    DataError,
    DesignMatrix,
    EstimationWarning,
    InMeanTransform,
    Innovation,
    MonthIndex,
    MonthlySeries,
    NumericalError,
    Role,
)

from . import _recursion
from .base import covariance_from_hessian, sandwich, standard_errors
from .distributions import get_distribution

MIN_OBSERVATIONS = 100
FLOOR_WARNING_SHARE = 0.01
PENALTY = 1e10
TIE_TOLERANCE = 1e-9
GRADIENT_TOLERANCE = 1e-7
ACCEPT_GRADIENT = 1e-4
POLISH_ROUNDS = 3
POLISH_TOLERANCE = 1e-6
# (rho_q, beta_s) starts for the long-run component
COMPONENT_START_GRID = ((0.8, 0.8), (0.95, 0.8), (0.99, 0.8), (0.95, 0.5), (0.99, 0.5))

_TRANSFORM_CODES = {
    InMeanTransform.IDENTITY: _recursion.TRANSFORM_IDENTITY,
    InMeanTransform.LN: _recursion.TRANSFORM_LN,
    InMeanTransform.SQRT: _recursion.TRANSFORM_SQRT,
}


@dataclass(frozen=True)
class FitOptions:
    multistarts: int = 5
    tol: float = 1e-10
    max_iter: int = 500
    seed: int = 0
    robust: bool = False
    n_jobs: int = 1
    jitter: float = 0.5


@dataclass
class PreparedData:
    """Arrays the recursion reads, restricted to the estimation rows."""

    y: np.ndarray
    X: np.ndarray
    z1: np.ndarray
    z2: np.ndarray
    unrest_d: np.ndarray
    first_month: MonthIndex

    @property
    def n(self) -> int:
        return len(self.y)


def parameter_names(spec: AcgarchSpec) -> list[str]:
    template = AcgarchParams(
        beta_unrest=(0.0,) * len(spec.unrest_columns),
        rho_controls=(0.0,) * len(spec.control_columns),
        theta1=(0.0,) * len(spec.longrun_exog),
        theta2=(0.0,) * len(spec.shortrun_exog),
    )
    return list(template.as_dict(spec))


def prepare_data(spec: AcgarchSpec, data: DesignMatrix) -> PreparedData:
    """
    Mean regressors, variance regressors and the asymmetry indicator.

    Leading and trailing rows with a missing entry (lags, sub-sample edges)
    are dropped; a gap inside the sample is an error.
    """
    data.require(spec.columns())
    y_all = data.array([spec.dependent])[:, 0]
    blocks = [data.array(spec.unrest_columns), data.array(spec.control_columns)]
    if spec.include_lagged_dependent:
        y_lag = np.concatenate([[np.nan], y_all[:-1]])
        blocks.insert(0, y_lag[:, None])
    mean_block = np.column_stack(blocks) if blocks else np.empty((data.length, 0))
    z1 = data.array(spec.longrun_exog)
    z2 = data.array(spec.shortrun_exog)

    everything = np.column_stack([y_all[:, None], mean_block, z1, z2])
    complete = ~np.isnan(everything).any(axis=1)
    if not complete.any():
        raise DataError("no month has complete data for the ACGARCH-M columns")
    rows = np.flatnonzero(complete)
    lo, hi = rows[0], rows[-1]
    if not complete[lo:hi + 1].all():
        gap = lo + int(np.flatnonzero(~complete[lo:hi + 1])[0])
        month = data.start.shift(gap)
        names = [n for n in spec.columns() if np.isnan(data.array([n])[gap, 0])]
        raise DataError(f"missing value inside the estimation sample at {month} in {', '.join(names) or spec.dependent}")

    window = slice(lo, hi + 1)
    y = y_all[window]
    if len(y) < MIN_OBSERVATIONS:
        raise DataError(f"ACGARCH-M needs at least {MIN_OBSERVATIONS} observations, got {len(y)}")
    if np.ptp(y) == 0:
        raise DataError(f"dependent column '{spec.dependent}' is constant")
    unrest = data.array(spec.unrest_columns)[window]
    unrest_d = (np.abs(unrest) > 0).any(axis=1).astype(float) if unrest.shape[1] else np.zeros(len(y))
    return PreparedData(
        y=y,
        X=np.column_stack([np.ones(len(y)), mean_block[window]]),
        z1=z1[window],
        z2=z2[window],
        unrest_d=unrest_d,
        first_month=data.start.shift(int(lo)),
    )


def information_criteria(loglik: float, k: int, n: int) -> tuple[float, float]:
    """Per-observation AIC and BIC."""
    return (-2.0 * loglik + 2.0 * k) / n, (-2.0 * loglik + k * np.log(n)) / n


class AcgarchLikelihood:
    """
    Log-likelihood of one spec on one data set, in natural and unconstrained
    coordinates.

    Unconstrained coordinates: omega = exp(u), rho_q = logistic(u),
    (alpha_s, beta_s) = the first two shares of softmax(u_a, u_b, 0),
    kappa_lev = -2 alpha_s + exp(u), shape = 2 + exp(u) for Student-t and
    exp(u) for GED. Everything else is unrestricted.
    """

    def __init__(self, spec: AcgarchSpec, data: PreparedData):
        self.spec = spec
        self.data = data
        self.names = parameter_names(spec)
        self.distribution = get_distribution(spec.innovation)
        ols = sm.OLS(data.y, data.X).fit()
        self.ols = ols
        self.v0 = float(np.mean(ols.resid ** 2))
        if not self.v0 > 0:
            raise DataError("mean equation fits the dependent column exactly")
        self._transform = _TRANSFORM_CODES[spec.in_mean_transform]
        self._use_unrest_d = spec.asymmetry_mode is AsymmetryMode.UNREST_DUMMY

    @property
    def k(self) -> int:
        return len(self.names)

    # -- coordinates -------------------------------------------------------

    def to_natural(self, u: np.ndarray) -> AcgarchParams:
        values = dict(zip(self.names, u))
        out = dict(values)
        out["omega"] = np.exp(values["omega"])
        if "rho_q" in values:
            out["rho_q"] = special.expit(values["rho_q"])
        shares = special.softmax([values["alpha_s"], values["beta_s"], 0.0])
        out["alpha_s"], out["beta_s"] = shares[0], shares[1]
        if "kappa_lev" in values:
            out["kappa_lev"] = -2.0 * out["alpha_s"] + np.exp(values["kappa_lev"])
        if self.spec.innovation is Innovation.STUDENT_T:
            out["shape"] = 2.0 + np.exp(values["shape"])
        else:
            out["shape"] = np.exp(values["shape"])
        return AcgarchParams.from_dict(self.spec, out)

    def to_unconstrained(self, params: AcgarchParams) -> np.ndarray:
        values = params.as_dict(self.spec)
        tiny = 1e-8
        alpha = max(values["alpha_s"], tiny)
        beta = max(values["beta_s"], tiny)
        rest = max(1.0 - alpha - beta, tiny)
        out = dict(values)
        out["omega"] = np.log(values["omega"])
        if "rho_q" in values:
            out["rho_q"] = special.logit(np.clip(values["rho_q"], tiny, 1 - tiny))
        out["alpha_s"] = np.log(alpha / rest)
        out["beta_s"] = np.log(beta / rest)
        if "kappa_lev" in values:
            out["kappa_lev"] = np.log(max(values["kappa_lev"] + 2.0 * alpha, tiny))
        if self.spec.innovation is Innovation.STUDENT_T:
            out["shape"] = np.log(max(values["shape"] - 2.0, tiny))
        else:
            out["shape"] = np.log(values["shape"])
        return np.array([out[name] for name in self.names], dtype=float)

    def natural_vector(self, params: AcgarchParams) -> np.ndarray:
        return np.array(list(params.as_dict(self.spec).values()), dtype=float)

    def from_natural_vector(self, theta: np.ndarray) -> AcgarchParams:
        return AcgarchParams.from_dict(self.spec, dict(zip(self.names, theta)))

    # -- evaluation --------------------------------------------------------

    def paths(self, params: AcgarchParams) -> dict:
        """Residuals, variance paths and the floor count under ``params``."""
        data = self.data
        b = np.array([params.mu] + ([params.phi_lag] if self.spec.include_lagged_dependent else [])
                     + list(params.beta_unrest) + list(params.rho_controls))
        resid_mean = data.y - data.X @ b
        z1 = data.z1 @ np.asarray(params.theta1) if data.z1.shape[1] else np.zeros(data.n)
        z2 = data.z2 @ np.asarray(params.theta2) if data.z2.shape[1] else np.zeros(data.n)
        eps = np.empty(data.n)
        sigma2 = np.empty(data.n)
        q = np.empty(data.n)
        floors = _recursion.filter_path(
            resid_mean, params.delta_mean, self._transform, z1, z2, data.unrest_d, self._use_unrest_d,
            params.omega, params.rho_q, params.phi_q, params.alpha_s, params.kappa_lev, params.beta_s,
            self.v0, eps, sigma2, q,
        )
        return {"eps": eps, "sigma2": sigma2, "q": q, "floors": floors}

    def contributions(self, params: AcgarchParams) -> np.ndarray:
        path = self.paths(params)
        return self.distribution.loglik(path["eps"], path["sigma2"], params.shape)

    def loglik(self, params: AcgarchParams) -> float:
        return float(np.sum(self.contributions(params)))

    def negative(self, u: np.ndarray) -> float:
        """Objective the optimizer minimizes; non-finite values become a large penalty."""
        with np.errstate(all="ignore"):
            try:
                value = -self.loglik(self.to_natural(u))
            except (DataError, FloatingPointError, ValueError):
                return PENALTY
        return value if np.isfinite(value) else PENALTY

    def gradient(self, u: np.ndarray) -> np.ndarray:
        return approx_fprime(u, self.negative, centered=True)

    def _natural_loglik(self, theta: np.ndarray) -> float:
        with np.errstate(all="ignore"):
            try:
                params = self.from_natural_vector(theta)
                params.validate(self.spec)
                return self.loglik(params)
            except DataError:
                return np.nan

    def _natural_contributions(self, theta: np.ndarray) -> np.ndarray:
        with np.errstate(all="ignore"):
            return self.contributions(self.from_natural_vector(theta))

    def covariance(self, params: AcgarchParams, robust: bool = False) -> np.ndarray:
        """Inverse observed information, or the sandwich form when ``robust``."""
        theta = self.natural_vector(params)
        hessian = approx_hess(theta, self._natural_loglik)
        if not np.all(np.isfinite(hessian)):
            warnings.warn("ACGARCH-M Hessian has non-finite entries, standard errors unavailable",
                          EstimationWarning, stacklevel=3)
            return np.full((len(theta), len(theta)), np.nan)
        if robust:
            scores = approx_fprime(theta, self._natural_contributions, centered=True)
            return sandwich(hessian, scores)
        return covariance_from_hessian(hessian, "ACGARCH-M")

    def start(self) -> AcgarchParams:
        """OLS mean coefficients with variance targeting at the OLS residual variance."""
        coef = list(self.ols.params)
        values = {"mu": coef.pop(0)}
        if self.spec.include_lagged_dependent:
            values["phi_lag"] = coef.pop(0)
        for name in self.spec.unrest_columns:
            values[f"beta[{name}]"] = coef.pop(0)
        for name in self.spec.control_columns:
            values[f"rho[{name}]"] = coef.pop(0)
        values.update({
            "delta_mean": 0.0,
            "omega": self.v0,
            "rho_q": 0.9 if self.spec.component else 0.0,
            "phi_q": 0.05 if self.spec.component else 0.0,
            "alpha_s": 0.05,
            "kappa_lev": 0.0,
            "beta_s": 0.8,
            "shape": self.distribution.default_shape,
        })
        for name in self.spec.longrun_exog:
            values[f"theta1[{name}]"] = 0.0
        for name in self.spec.shortrun_exog:
            values[f"theta2[{name}]"] = 0.0
        return AcgarchParams.from_dict(self.spec, values)


def loglik(spec: AcgarchSpec, params: AcgarchParams, data: DesignMatrix) -> float:
    """
    Log-likelihood of ``data`` under ``params``.

    Raises DataError for inadmissible parameters and NumericalError when an
    intermediate value is not finite.
    """
    params.validate(spec)
    likelihood = AcgarchLikelihood(spec, prepare_data(spec, data))
    with np.errstate(all="ignore"):
        contributions = likelihood.contributions(params)
    bad = np.flatnonzero(~np.isfinite(contributions))
    if bad.size:
        month = likelihood.data.first_month.shift(int(bad[0]))
        raise NumericalError(f"non-finite log-likelihood at observation {int(bad[0])} ({month})")
    return float(contributions.sum())


def _start_points(likelihood: AcgarchLikelihood, options: FitOptions) -> list[np.ndarray]:
    """
    The OLS / variance-targeting point, the persistence grid for component
    specs, then ``multistarts - 1`` jittered copies of the first point.
    """
    start = likelihood.start()
    points = [likelihood.to_unconstrained(start)]
    if likelihood.spec.component:
        for rho_q, beta_s in COMPONENT_START_GRID:
            points.append(likelihood.to_unconstrained(replace(start, rho_q=rho_q, beta_s=beta_s)))
    rng = np.random.default_rng(options.seed)
    base = points[0]
    points += [base + rng.normal(0.0, options.jitter, base.size) for _ in range(options.multistarts - 1)]
    return points


def _run_start(likelihood: AcgarchLikelihood, u0: np.ndarray, options: FitOptions) -> dict:
    """
    L-BFGS-B on the per-observation objective, restarted from its own
    optimum until a round gains less than POLISH_TOLERANCE in log-likelihood.
    The returned point is never worse than ``u0``.
    """
    n = likelihood.data.n
    trace = []

    def objective(u):
        return likelihood.negative(u) / n

    def jacobian(u):
        return likelihood.gradient(u) / n

    def record(intermediate_result):
        trace.append(-n * float(intermediate_result.fun))

    start_value = likelihood.negative(u0)
    x, value = u0, start_value
    iterations, optimizer_success, message = 0, False, "no improvement on the start point"
    for _ in range(POLISH_ROUNDS):
        result = optimize.minimize(
            objective,
            x,
            jac=jacobian,
            method="L-BFGS-B",
            callback=record,
            options={"ftol": options.tol, "gtol": GRADIENT_TOLERANCE, "maxiter": options.max_iter},
        )
        iterations += int(result.nit)
        candidate = n * float(result.fun)
        if not candidate < value:
            break
        gain = value - candidate
        x, value = result.x, candidate
        optimizer_success, message = bool(result.success), str(result.message)
        if gain < POLISH_TOLERANCE:
            break

    gradient_max = float(np.max(np.abs(jacobian(x)))) if value < PENALTY else float("inf")
    return {
        "x": x,
        "loglik": -value,
        "start_loglik": -start_value,
        "success": value < PENALTY and (optimizer_success or gradient_max < ACCEPT_GRADIENT),
        "iterations": iterations,
        "message": message,
        "trace": trace,
    }


def fit(spec: AcgarchSpec, data: DesignMatrix, options: FitOptions = FitOptions()) -> AcgarchFit:
    """
    Maximum-likelihood fit with multistarts.

    The first start is the OLS / variance-targeting point. Component specs
    add a grid over long-run persistence and short-run beta. The remaining
    ``multistarts - 1`` starts jitter the first in unconstrained coordinates
    with draws from ``options.seed``. The fit with the highest
    log-likelihood among converged starts is returned.

    Raises:
        DataError: bad columns, too few rows, constant dependent
        ConvergenceError: no start converged (``report`` holds the details)
    """
    likelihood = AcgarchLikelihood(spec, prepare_data(spec, data))
    starts = _start_points(likelihood, options)

    with ThreadPoolExecutor(max_workers=max(1, options.n_jobs)) as executor:
        runs = list(executor.map(lambda u0: _run_start(likelihood, u0, options), starts))

    converged = [r for r in runs if r["success"]]
    report = ConvergenceReport(
        converged=bool(converged),
        iterations=sum(r["iterations"] for r in runs),
        gradient_norm=float("nan"),
        restarts=len(runs),
        successful_starts=len(converged),
        message="; ".join(sorted({r["message"] for r in runs})),
        start_logliks=[r["start_loglik"] for r in runs],
    )
    if not converged:
        raise ConvergenceError(
            f"ACGARCH-M fit of '{spec.dependent}' did not converge from any of {len(runs)} starts", report.to_dict()
        )
    if len(converged) < len(runs):
        warnings.warn(f"{len(runs) - len(converged)} of {len(runs)} ACGARCH-M starts did not converge",
                      EstimationWarning, stacklevel=2)

    best = max(converged, key=lambda r: r["loglik"])
    params = likelihood.to_natural(best["x"])
    path = likelihood.paths(params)
    report.gradient_norm = float(np.linalg.norm(likelihood.gradient(best["x"])))
    report.trace = best["trace"]
    report.floor_count = int(path["floors"])

    n = likelihood.data.n
    if path["floors"] >= FLOOR_WARNING_SHARE * n:
        warnings.warn(f"variance floor hit {path['floors']} times in {n} observations",
                      EstimationWarning, stacklevel=2)

    cov = likelihood.covariance(params, robust=options.robust)
    ses = dict(zip(likelihood.names, standard_errors(cov)))
    value = likelihood.loglik(params)
    aic, bic = information_criteria(value, likelihood.k, n)

    y = likelihood.data.y
    fitted = y - path["eps"]
    r2 = 1.0 - np.sum(path["eps"] ** 2) / np.sum((y - y.mean()) ** 2)
    k_mean = likelihood.data.X.shape[1] - 1 + int(spec.in_mean)
    adj_r2 = 1.0 - (1.0 - r2) * (n - 1) / (n - k_mean - 1)

    return AcgarchFit(
        spec=spec,
        params=params,
        std_errors=ses,
        loglik=value,
        n=n,
        k=likelihood.k,
        aic=aic,
        bic=bic,
        adj_r2=float(adj_r2),
        sigma2=path["sigma2"],
        q=path["q"],
        fitted_mean=fitted,
        std_resid=path["eps"] / np.sqrt(path["sigma2"]),
        convergence=report,
        robust=options.robust,
        first_month=likelihood.data.first_month,
    )


def select_in_mean_transform(spec: AcgarchSpec, data: DesignMatrix, criterion: str = "aic",
                             options: FitOptions = FitOptions()) -> tuple[InMeanTransform, dict]:
    """
    Fit every in-mean transform and pick the lowest AIC (or BIC).

    Criteria within 1e-9 of each other are tied; ties go to identity, then
    ln, then sqrt. Transforms whose fit fails are left out of the result.
    """
    if criterion not in ("aic", "bic"):
        raise DataError(f"unknown selection criterion '{criterion}' (use aic or bic)")
    fits = {}
    failures = []
    for transform in TRANSFORM_PREFERENCE:
        try:
            fits[transform] = fit(spec.with_transform(transform), data, options)
        except NumericalError as e:
            failures.append(f"{transform.value}: {e}")
    if not fits:
        raise ConvergenceError("every in-mean transform failed: " + "; ".join(failures))
    best_value = min(getattr(f, criterion) for f in fits.values())
    for transform in TRANSFORM_PREFERENCE:
        if transform in fits and getattr(fits[transform], criterion) <= best_value + TIE_TOLERANCE:
            return transform, fits
    raise AssertionError("unreachable")


def simulate(spec: AcgarchSpec, params: AcgarchParams, T: int, seed: int,
             exog: Optional[DesignMatrix] = None) -> dict:
    """
    Draw a path of length ``T`` from the model.

    Exogenous columns named by the spec are read from the first ``T`` rows of
    ``exog``. The recursion starts at omega. Same seed, same path.
    """
    params.validate(spec)
    if T < 1:
        raise DataError(f"simulation length must be >= 1, got {T}")
    needed = list(spec.unrest_columns + spec.control_columns + spec.longrun_exog + spec.shortrun_exog)
    if needed:
        if exog is None:
            raise DataError(f"spec needs exogenous columns {', '.join(needed)}")
        exog.require(needed)
        if exog.length < T:
            raise DataError(f"exogenous data cover {exog.length} months, {T} requested")
        block = exog.array(needed)[:T]
        if np.isnan(block).any():
            raise DataError("exogenous data have missing values in the simulated range")

    def columns(names):
        return exog.array(names)[:T] if names else np.zeros((T, 0))

    unrest = columns(spec.unrest_columns)
    xb = params.mu + unrest @ np.asarray(params.beta_unrest) + columns(spec.control_columns) @ np.asarray(params.rho_controls)
    xb = np.broadcast_to(xb, (T,)).astype(float)
    z1 = columns(spec.longrun_exog) @ np.asarray(params.theta1) if spec.longrun_exog else np.zeros(T)
    z2 = columns(spec.shortrun_exog) @ np.asarray(params.theta2) if spec.shortrun_exog else np.zeros(T)
    unrest_d = (np.abs(unrest) > 0).any(axis=1).astype(float) if spec.unrest_columns else np.zeros(T)

    rng = np.random.default_rng(seed)
    z = get_distribution(spec.innovation).draw(rng, T, params.shape)
    y_pre = params.mu / (1.0 - params.phi_lag) if abs(params.phi_lag) < 1 else 0.0
    y = np.empty(T)
    sigma2 = np.empty(T)
    q = np.empty(T)
    floors = _recursion.simulate_path(
        z, xb, params.phi_lag, y_pre, params.delta_mean, _TRANSFORM_CODES[spec.in_mean_transform],
        z1, z2, unrest_d, spec.asymmetry_mode is AsymmetryMode.UNREST_DUMMY,
        params.omega, params.rho_q, params.phi_q, params.alpha_s, params.kappa_lev, params.beta_s,
        params.omega, y, sigma2, q,
    )
    return {"y": y, "sigma2": sigma2, "q": q, "floors": int(floors)}


def simulated_design(spec: AcgarchSpec, y: np.ndarray, start: MonthIndex,
                     exog: Optional[DesignMatrix] = None) -> DesignMatrix:
    """Design matrix holding a simulated dependent column plus the spec's exogenous columns."""
    assignments = [(MonthlySeries.from_array(spec.dependent, start, y), Role.DEPENDENT)]
    roles = (
        [(n, Role.UNREST) for n in spec.unrest_columns]
        + [(n, Role.CONTROL) for n in spec.control_columns]
        + [(n, Role.VARIANCE_EXOG_LONGRUN) for n in spec.longrun_exog]
        + [(n, Role.VARIANCE_EXOG_SHORTRUN) for n in spec.shortrun_exog]
    )
    seen = set()
    for name, role in roles:
        if name in seen:
            continue
        seen.add(name)
        values = exog.array([name])[:len(y), 0]
        assignments.append((MonthlySeries.from_array(name, start, values), role))
    return DesignMatrix.from_series(assignments)
