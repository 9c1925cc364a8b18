"""ACGARCH-M specification, parameters and fit results."""

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional

import numpy as np

from .errors import DataError


class InMeanTransform(str, Enum):
    IDENTITY = "identity"
    LN = "ln"
    SQRT = "sqrt"


# Tie-break order for transform selection.
TRANSFORM_PREFERENCE = (InMeanTransform.IDENTITY, InMeanTransform.LN, InMeanTransform.SQRT)


class AsymmetryMode(str, Enum):
    NEGATIVE_RESIDUAL = "negative_residual"
    UNREST_DUMMY = "unrest_dummy"


class Innovation(str, Enum):
    STUDENT_T = "student_t"
    GED = "ged"


@dataclass(frozen=True)
class AcgarchSpec:
    """
    Which columns enter which equation of the model, and which terms are on.

    ``component=False`` fixes the long-run level at omega (plain GARCH(1,1)),
    ``asymmetric=False`` drops the leverage term and ``in_mean=False`` drops
    the variance term from the mean equation.
    """

    dependent: str
    include_lagged_dependent: bool = True
    unrest_columns: tuple = ()
    control_columns: tuple = ()
    in_mean_transform: InMeanTransform = InMeanTransform.IDENTITY
    longrun_exog: tuple = ()
    shortrun_exog: tuple = ()
    asymmetry_mode: AsymmetryMode = AsymmetryMode.NEGATIVE_RESIDUAL
    innovation: Innovation = Innovation.STUDENT_T
    component: bool = True
    asymmetric: bool = True
    in_mean: bool = True

    def __post_init__(self):
        for label in ("unrest_columns", "control_columns", "longrun_exog", "shortrun_exog"):
            object.__setattr__(self, label, tuple(getattr(self, label)))
        try:
            object.__setattr__(self, "in_mean_transform", InMeanTransform(self.in_mean_transform))
            object.__setattr__(self, "asymmetry_mode", AsymmetryMode(self.asymmetry_mode))
            object.__setattr__(self, "innovation", Innovation(self.innovation))
        except ValueError as e:
            raise DataError(f"invalid ACGARCH-M spec: {e}") from None
        regressors = self.unrest_columns + self.control_columns + self.longrun_exog + self.shortrun_exog
        if self.dependent in regressors:
            raise DataError(f"dependent column '{self.dependent}' also listed as a regressor")
        mean_columns = self.unrest_columns + self.control_columns
        if len(set(mean_columns)) != len(mean_columns):
            raise DataError("a mean-equation column is listed twice")
        if self.longrun_exog and not self.component:
            raise DataError("long-run exogenous columns need the component model")
        if self.asymmetry_mode is AsymmetryMode.UNREST_DUMMY and self.asymmetric and not self.unrest_columns:
            raise DataError("asymmetry_mode=unrest_dummy needs at least one unrest column")

    def columns(self) -> list[str]:
        """Every design column the model reads, dependent first."""
        seen = []
        for name in (self.dependent,) + self.unrest_columns + self.control_columns + self.longrun_exog + self.shortrun_exog:
            if name not in seen:
                seen.append(name)
        return seen

    def with_transform(self, transform: InMeanTransform) -> "AcgarchSpec":
        return replace(self, in_mean_transform=InMeanTransform(transform))

    def to_dict(self) -> dict:
        return {
            "dependent": self.dependent,
            "include_lagged_dependent": self.include_lagged_dependent,
            "unrest_columns": list(self.unrest_columns),
            "control_columns": list(self.control_columns),
            "in_mean_transform": self.in_mean_transform.value,
            "longrun_exog": list(self.longrun_exog),
            "shortrun_exog": list(self.shortrun_exog),
            "asymmetry_mode": self.asymmetry_mode.value,
            "innovation": self.innovation.value,
            "component": self.component,
            "asymmetric": self.asymmetric,
            "in_mean": self.in_mean,
        }


@dataclass(frozen=True)
class AcgarchParams:
    """Natural-scale parameters. Vectors follow the column order of the spec."""

    mu: float = 0.0
    phi_lag: float = 0.0
    beta_unrest: tuple = ()
    rho_controls: tuple = ()
    delta_mean: float = 0.0
    omega: float = 1.0
    rho_q: float = 0.9
    phi_q: float = 0.0
    theta1: tuple = ()
    alpha_s: float = 0.05
    kappa_lev: float = 0.0
    beta_s: float = 0.8
    theta2: tuple = ()
    shape: float = 8.0

    def __post_init__(self):
        for label in ("beta_unrest", "rho_controls", "theta1", "theta2"):
            object.__setattr__(self, label, tuple(float(v) for v in getattr(self, label)))

    def validate(self, spec: AcgarchSpec) -> None:
        """Raise DataError unless the parameters are admissible for ``spec``."""
        checks = [
            (len(self.beta_unrest) == len(spec.unrest_columns), "beta_unrest length does not match unrest_columns"),
            (len(self.rho_controls) == len(spec.control_columns), "rho_controls length does not match control_columns"),
            (len(self.theta1) == len(spec.longrun_exog), "theta1 length does not match longrun_exog"),
            (len(self.theta2) == len(spec.shortrun_exog), "theta2 length does not match shortrun_exog"),
            (self.omega > 0, f"omega must be > 0, got {self.omega}"),
            (self.alpha_s >= 0, f"alpha_s must be >= 0, got {self.alpha_s}"),
            (self.beta_s >= 0, f"beta_s must be >= 0, got {self.beta_s}"),
            (self.alpha_s + self.beta_s < 1, f"alpha_s + beta_s must be < 1, got {self.alpha_s + self.beta_s}"),
            (self.alpha_s + self.kappa_lev / 2 >= 0, "alpha_s + kappa_lev/2 must be >= 0"),
        ]
        if spec.component:
            checks.append((0 < self.rho_q < 1, f"rho_q must lie in (0, 1), got {self.rho_q}"))
        else:
            checks.append((self.phi_q == 0, "phi_q must be 0 without the long-run component"))
        if not spec.asymmetric:
            checks.append((self.kappa_lev == 0, "kappa_lev must be 0 for a symmetric spec"))
        if not spec.in_mean:
            checks.append((self.delta_mean == 0, "delta_mean must be 0 when the in-mean term is off"))
        if not spec.include_lagged_dependent:
            checks.append((self.phi_lag == 0, "phi_lag must be 0 without the lagged dependent"))
        if spec.innovation is Innovation.STUDENT_T:
            checks.append((self.shape > 2, f"Student-t degrees of freedom must be > 2, got {self.shape}"))
        else:
            checks.append((self.shape > 0, f"GED shape must be > 0, got {self.shape}"))
        for ok, message in checks:
            if not ok:
                raise DataError(f"invalid ACGARCH-M parameters: {message}")
        values = [self.mu, self.phi_lag, self.delta_mean, self.omega, self.rho_q, self.phi_q,
                  self.alpha_s, self.kappa_lev, self.beta_s, self.shape,
                  *self.beta_unrest, *self.rho_controls, *self.theta1, *self.theta2]
        if not np.all(np.isfinite(values)):
            raise DataError("invalid ACGARCH-M parameters: non-finite value")

    def as_dict(self, spec: AcgarchSpec) -> dict:
        """Free parameters of ``spec`` by report name, in estimation order."""
        out = {"mu": self.mu}
        if spec.include_lagged_dependent:
            out["phi_lag"] = self.phi_lag
        for name, value in zip(spec.unrest_columns, self.beta_unrest):
            out[f"beta[{name}]"] = value
        for name, value in zip(spec.control_columns, self.rho_controls):
            out[f"rho[{name}]"] = value
        if spec.in_mean:
            out["delta_mean"] = self.delta_mean
        out["omega"] = self.omega
        if spec.component:
            out["rho_q"] = self.rho_q
            out["phi_q"] = self.phi_q
            for name, value in zip(spec.longrun_exog, self.theta1):
                out[f"theta1[{name}]"] = value
        out["alpha_s"] = self.alpha_s
        if spec.asymmetric:
            out["kappa_lev"] = self.kappa_lev
        out["beta_s"] = self.beta_s
        for name, value in zip(spec.shortrun_exog, self.theta2):
            out[f"theta2[{name}]"] = value
        out["shape"] = self.shape
        return out

    @classmethod
    def from_dict(cls, spec: AcgarchSpec, values: dict) -> "AcgarchParams":
        """Inverse of ``as_dict``; terms switched off by the spec come back as 0."""
        return cls(
            mu=values["mu"],
            phi_lag=values.get("phi_lag", 0.0),
            beta_unrest=tuple(values[f"beta[{n}]"] for n in spec.unrest_columns),
            rho_controls=tuple(values[f"rho[{n}]"] for n in spec.control_columns),
            delta_mean=values.get("delta_mean", 0.0),
            omega=values["omega"],
            rho_q=values.get("rho_q", 0.0),
            phi_q=values.get("phi_q", 0.0),
            theta1=tuple(values[f"theta1[{n}]"] for n in spec.longrun_exog),
            alpha_s=values["alpha_s"],
            kappa_lev=values.get("kappa_lev", 0.0),
            beta_s=values["beta_s"],
            theta2=tuple(values[f"theta2[{n}]"] for n in spec.shortrun_exog),
            shape=values["shape"],
        )


@dataclass
class ConvergenceReport:
    """What the optimizer did across all multistarts."""

    converged: bool
    iterations: int
    gradient_norm: float
    restarts: int
    successful_starts: int
    message: str = ""
    floor_count: int = 0
    start_logliks: list = field(default_factory=list)
    trace: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "converged": self.converged,
            "iterations": self.iterations,
            "gradient_norm": self.gradient_norm,
            "restarts": self.restarts,
            "successful_starts": self.successful_starts,
            "message": self.message,
            "floor_count": self.floor_count,
            "start_logliks": list(self.start_logliks),
        }


@dataclass
class AcgarchFit:
    """A fitted ACGARCH-M model with its paths and diagnostics."""

    spec: AcgarchSpec
    params: AcgarchParams
    std_errors: dict
    loglik: float
    n: int
    k: int
    aic: float
    bic: float
    adj_r2: float
    sigma2: np.ndarray
    q: np.ndarray
    fitted_mean: np.ndarray
    std_resid: np.ndarray
    convergence: ConvergenceReport
    robust: bool = False
    first_month: Optional[object] = None

    def estimates(self) -> dict:
        return self.params.as_dict(self.spec)

    def t_stats(self) -> dict:
        out = {}
        for name, value in self.estimates().items():
            se = self.std_errors.get(name)
            out[name] = value / se if se and np.isfinite(se) and se > 0 else float("nan")
        return out

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "estimates": self.estimates(),
            "std_errors": dict(self.std_errors),
            "loglik": self.loglik,
            "n": self.n,
            "k": self.k,
            "aic": self.aic,
            "bic": self.bic,
            "adj_r2": self.adj_r2,
            "robust": self.robust,
            "convergence": self.convergence.to_dict(),
        }
