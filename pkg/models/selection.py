"""Result types for probit, Heckman and IV-GMM fits."""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import stats


def _t_values(coefficients: np.ndarray, std_errors: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(std_errors > 0, coefficients / std_errors, np.nan)


@dataclass
class ProbitFit:
    """Probit maximum-likelihood estimates."""

    names: list
    coefficients: np.ndarray
    std_errors: np.ndarray
    cov: np.ndarray
    loglik: float
    null_loglik: float
    index: np.ndarray
    gradient_norm: float
    n: int

    @property
    def probabilities(self) -> np.ndarray:
        return stats.norm.cdf(self.index)

    def t_values(self) -> np.ndarray:
        return _t_values(self.coefficients, self.std_errors)


@dataclass
class HeckmanFit:
    """
    Outcome equation corrected for selection.

    ``two_step`` fills ``mills_coef``/``mills_se`` and the implied rho and
    sigma; ``ml`` estimates rho and sigma directly and leaves the Mills
    coefficient as ``rho * sigma``.
    """

    method: str
    names: list
    coefficients: np.ndarray
    std_errors: np.ndarray
    mills_coef: float
    mills_se: float
    rho: float
    sigma: float
    selected_n: int
    total_n: int
    probit: ProbitFit
    rho_se: Optional[float] = None
    sigma_se: Optional[float] = None
    loglik: Optional[float] = None
    selection_names: list = field(default_factory=list)
    selection_coefficients: Optional[np.ndarray] = None
    exclusion_restriction: bool = True

    def t_values(self) -> np.ndarray:
        return _t_values(self.coefficients, self.std_errors)

    @property
    def mills_p_value(self) -> float:
        if not self.mills_se or not np.isfinite(self.mills_se):
            return float("nan")
        return float(2 * stats.norm.sf(abs(self.mills_coef / self.mills_se)))


@dataclass
class IvGmmFit:
    """Two-step efficient GMM estimates with identification diagnostics."""

    names: list
    coefficients: np.ndarray
    std_errors: np.ndarray
    instruments: list
    endogenous: list
    n: int
    kp_stat: float
    kp_df: int
    kp_p: float
    j_stat: Optional[float] = None
    j_df: Optional[int] = None
    j_p: Optional[float] = None

    @property
    def overidentified(self) -> bool:
        return self.j_df is not None and self.j_df > 0

    def t_values(self) -> np.ndarray:
        return _t_values(self.coefficients, self.std_errors)
