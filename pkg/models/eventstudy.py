"""Event-study specifications and results."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from .calendar import MonthIndex
from .errors import DataError


class BaselineModel(str, Enum):
    RAW_RETURNS = "raw_returns"
    CONSTANT_MEAN = "constant_mean"


class EventTest(str, Enum):
    PATELL_ADJUSTED = "patell_adjusted"
    GRANKT = "grankt"


def significance_stars(p_value: Optional[float]) -> str:
    """Two-sided convention used in every report: *** 1%, ** 5%, * 10%."""
    if p_value is None or not np.isfinite(p_value):
        return ""
    if p_value < 0.01:
        return "***"
    if p_value < 0.05:
        return "**"
    if p_value < 0.10:
        return "*"
    return ""


@dataclass(frozen=True)
class EventStudySpec:
    """Baseline model, event window and tests for a monthly multi-event study."""

    baseline_model: BaselineModel = BaselineModel.CONSTANT_MEAN
    pre: int = -1
    post: int = 1
    estimation_window_length: int = 60
    tests: frozenset = field(default_factory=lambda: frozenset({EventTest.PATELL_ADJUSTED, EventTest.GRANKT}))

    def __post_init__(self):
        object.__setattr__(self, "baseline_model", BaselineModel(self.baseline_model))
        object.__setattr__(self, "tests", frozenset(EventTest(t) for t in self.tests))
        if not self.pre <= 0 <= self.post:
            raise DataError(f"event window must satisfy pre <= 0 <= post, got [{self.pre}, {self.post}]")
        if self.estimation_window_length < 2:
            raise DataError("estimation window needs at least 2 months")

    @property
    def window_length(self) -> int:
        return self.post - self.pre + 1


@dataclass(frozen=True)
class EventSample:
    """
    One event's abnormal returns.

    ``event_ar`` covers the event window (pre..post around ``event_month``),
    ``estimation_ar`` the months in ``estimation_months``, which end right
    before the event window opens.
    """

    event_month: MonthIndex
    event_ar: np.ndarray
    estimation_ar: np.ndarray
    estimation_months: tuple

    @property
    def car(self) -> float:
        return float(np.sum(self.event_ar))

    @property
    def has_missing(self) -> bool:
        return bool(np.isnan(self.event_ar).any() or np.isnan(self.estimation_ar).any())


@dataclass(frozen=True)
class TestStatistic:
    """A test statistic with its two-sided p-value."""

    name: str
    statistic: float
    p_value: float
    df: Optional[float] = None

    @property
    def abs_t(self) -> float:
        return abs(self.statistic)

    @property
    def stars(self) -> str:
        return significance_stars(self.p_value)

    def to_dict(self) -> dict:
        return {"name": self.name, "statistic": self.statistic, "p_value": self.p_value, "df": self.df}


@dataclass(frozen=True)
class EventStudyResult:
    """Per-event ARs and CARs, the CAAR and the requested test statistics."""

    label: str
    spec: EventStudySpec
    event_months: tuple
    ars: np.ndarray
    cars: np.ndarray
    caar: float
    tests: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.event_months)

    def to_dict(self) -> dict:
        row = {
            "event_filter": self.label,
            "model": self.spec.baseline_model.value,
            "window": f"[{self.spec.pre},{self.spec.post}]",
            "n": self.n,
            "caar": self.caar,
        }
        for name in sorted(self.tests):
            test = self.tests[name]
            row[f"{name}_t"] = test.abs_t
            row[f"{name}_p"] = test.p_value
            row[f"{name}_stars"] = test.stars
        return row


@dataclass(frozen=True)
class DailyStudyRow:
    """One cell of the daily historical-mean table."""

    history_close: int
    window: tuple
    measure: str
    delta: float
    statistic: float
    p_value: float

    @property
    def stars(self) -> str:
        return significance_stars(self.p_value)

    def to_dict(self) -> dict:
        return {
            "history_close": self.history_close,
            "window": f"[{self.window[0]},{self.window[1]}]",
            "measure": self.measure,
            "delta": self.delta,
            "t": self.statistic,
            "p_value": self.p_value,
            "stars": self.stars,
        }


@dataclass(frozen=True)
class DailyStudyResult:
    """Measures x windows x history closes for one event date."""

    event_date: object
    rows: tuple

    def cell(self, history_close: int, window: tuple, measure: str) -> DailyStudyRow:
        for row in self.rows:
            if row.history_close == history_close and tuple(row.window) == tuple(window) and row.measure == measure:
                return row
        raise KeyError((history_close, window, measure))
