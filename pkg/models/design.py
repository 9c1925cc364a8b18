"""Design matrix: named monthly columns sharing one calendar, each with a role."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional

import numpy as np
import pandas as pd

from .calendar import MonthIndex
from .errors import DataError
from .series import MonthlySeries


class Role(str, Enum):
    DEPENDENT = "dependent"
    LAGGED_DEPENDENT = "lagged_dependent"
    UNREST = "unrest"
    CONTROL = "control"
    VARIANCE_EXOG_LONGRUN = "variance_exog_longrun"
    VARIANCE_EXOG_SHORTRUN = "variance_exog_shortrun"
    INSTRUMENT = "instrument"


@dataclass(frozen=True)
class DesignMatrix:
    """
    Columns of equal calendar range with a role label per column.

    A column may be assigned a role once; rows with a missing entry in any
    column are reported by ``incomplete_rows``.
    """

    start: MonthIndex
    length: int
    columns: dict = field(default_factory=dict)
    roles: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.length < 1:
            raise DataError("design matrix needs at least one month")
        columns = dict(self.columns)
        roles = {name: Role(role) for name, role in self.roles.items()}
        for name, series in columns.items():
            if series.start != self.start or len(series) != self.length:
                raise DataError(
                    f"column '{name}' covers {series.start}..{series.end}, expected {self.start} x{self.length}"
                )
            if name not in roles:
                raise DataError(f"column '{name}' has no role")
        for name in roles:
            if name not in columns:
                raise DataError(f"role given for unknown column '{name}'")
        object.__setattr__(self, "columns", columns)
        object.__setattr__(self, "roles", roles)

    @classmethod
    def from_series(cls, assignments: Iterable[tuple[MonthlySeries, Role]],
                    first: Optional[MonthIndex] = None,
                    last: Optional[MonthIndex] = None) -> "DesignMatrix":
        """
        Build from (series, role) pairs, trimmed to ``first..last``.

        Without explicit bounds the common overlap of all series is used.
        """
        assignments = list(assignments)
        if not assignments:
            raise DataError("design matrix needs at least one column")
        first = first or max(s.start for s, _ in assignments)
        last = last or min(s.end for s, _ in assignments)
        if last < first:
            raise DataError("design matrix columns do not overlap")
        columns, roles = {}, {}
        for series, role in assignments:
            if series.name in columns:
                raise DataError(f"column '{series.name}' named twice")
            columns[series.name] = series.window(first, last)
            roles[series.name] = Role(role)
        return cls(first, first.months_until(last) + 1, columns, roles)

    @property
    def end(self) -> MonthIndex:
        return self.start.shift(self.length - 1)

    def names(self, role: Optional[Role] = None) -> list[str]:
        if role is None:
            return list(self.columns)
        return [name for name, r in self.roles.items() if r is Role(role)]

    def require(self, names: Iterable[str]) -> None:
        missing = [n for n in names if n not in self.columns]
        if missing:
            raise DataError(f"design matrix has no column(s) {', '.join(missing)}")

    def array(self, names: Iterable[str]) -> np.ndarray:
        """Columns stacked as a (length, k) float array with NaN for missing."""
        names = list(names)
        self.require(names)
        if not names:
            return np.empty((self.length, 0))
        return np.column_stack([self.columns[n].to_array() for n in names])

    def frame(self) -> pd.DataFrame:
        index = pd.period_range(start=str(self.start), periods=self.length, freq="M")
        return pd.DataFrame({n: s.to_array() for n, s in self.columns.items()}, index=index)

    def incomplete_rows(self, names: Optional[Iterable[str]] = None) -> np.ndarray:
        """Boolean mask of rows with a missing entry in any of ``names`` (default all)."""
        values = self.array(names if names is not None else self.names())
        if values.shape[1] == 0:
            return np.zeros(self.length, dtype=bool)
        return np.isnan(values).any(axis=1)

    def with_column(self, series: MonthlySeries, role: Role) -> "DesignMatrix":
        if series.name in self.columns:
            raise DataError(f"column '{series.name}' named twice")
        columns = dict(self.columns)
        roles = dict(self.roles)
        columns[series.name] = series.window(self.start, self.end)
        roles[series.name] = Role(role)
        return DesignMatrix(self.start, self.length, columns, roles)

    def window(self, first: MonthIndex, last: MonthIndex) -> "DesignMatrix":
        columns = {n: s.window(first, last) for n, s in self.columns.items()}
        return DesignMatrix(first, first.months_until(last) + 1, columns, dict(self.roles))
