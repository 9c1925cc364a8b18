"""Unit-variance innovation distributions for the ACGARCH-M likelihood."""

from abc import ABC, abstractmethod

import numpy as np
from scipy import special, stats

from models import DataError, Innovation


class Distribution(ABC):
    """
    Abstract base class for standardized innovation densities.

    Each distribution must implement:
    - name: Label matching the Innovation enum
    - check_shape(): Reject inadmissible shape parameters
    - logpdf(): Log density of unit-variance draws
    - draw(): Unit-variance random draws

    ``loglik`` turns the unit-variance density into the density of a
    residual with conditional variance sigma2.
    """

    name: str = ""
    default_shape: float = 0.0

    @abstractmethod
    def check_shape(self, shape: float) -> None:
        pass

    @abstractmethod
    def logpdf(self, z: np.ndarray, shape: float) -> np.ndarray:
        pass

    @abstractmethod
    def draw(self, rng: np.random.Generator, size: int, shape: float) -> np.ndarray:
        pass

    def loglik(self, resid: np.ndarray, sigma2: np.ndarray, shape: float) -> np.ndarray:
        """Per-observation log-likelihood of ``resid`` with variance ``sigma2``."""
        self.check_shape(shape)
        return self.logpdf(resid / np.sqrt(sigma2), shape) - 0.5 * np.log(sigma2)


class StudentT(Distribution):
    """Student-t rescaled to unit variance; needs nu > 2."""

    name = Innovation.STUDENT_T.value
    default_shape = 8.0

    def check_shape(self, shape: float) -> None:
        if not shape > 2:
            raise DataError(f"Student-t degrees of freedom must be > 2, got {shape}")

    def logpdf(self, z: np.ndarray, shape: float) -> np.ndarray:
        scale = np.sqrt((shape - 2.0) / shape)
        return stats.t.logpdf(z, shape, scale=scale)

    def draw(self, rng: np.random.Generator, size: int, shape: float) -> np.ndarray:
        self.check_shape(shape)
        return rng.standard_t(shape, size) * np.sqrt((shape - 2.0) / shape)


class GED(Distribution):
    """Generalized error distribution with unit variance; shape 2 is Gaussian."""

    name = Innovation.GED.value
    default_shape = 1.5

    def check_shape(self, shape: float) -> None:
        if not shape > 0:
            raise DataError(f"GED shape must be > 0, got {shape}")

    @staticmethod
    def _scale(shape: float) -> float:
        return float(np.exp(0.5 * (special.gammaln(1.0 / shape) - special.gammaln(3.0 / shape))))

    def logpdf(self, z: np.ndarray, shape: float) -> np.ndarray:
        return stats.gennorm.logpdf(z, shape, scale=self._scale(shape))

    def draw(self, rng: np.random.Generator, size: int, shape: float) -> np.ndarray:
        self.check_shape(shape)
        return stats.gennorm.rvs(shape, scale=self._scale(shape), size=size, random_state=rng)


DISTRIBUTIONS = {
    Innovation.STUDENT_T: StudentT(),
    Innovation.GED: GED(),
}


def get_distribution(innovation: Innovation) -> Distribution:
    return DISTRIBUTIONS[Innovation(innovation)]
