"""Calendar-indexed series: monthly values and daily quotes."""

import math
from dataclasses import dataclass, field
from datetime import date
from typing import Iterable, Optional, Sequence

import numpy as np
import pandas as pd

from .calendar import MonthIndex, month_range
from .errors import DataError


def _clean_value(value) -> Optional[float]:
    if value is None:
        return None
    value = float(value)
    if math.isnan(value):
        return None
    if math.isinf(value):
        raise DataError(f"series values must be finite, got {value}")
    return value


@dataclass(frozen=True)
class MonthlySeries:
    """
    A named, contiguous monthly series.

    One slot per month starting at ``start``. Missing slots are ``None``
    (``NaN`` in array form). Instances are immutable; every transform returns
    a new series.
    """

    name: str
    start: MonthIndex
    values: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(_clean_value(v) for v in self.values))

    @classmethod
    def from_array(cls, name: str, start: MonthIndex, values: Iterable) -> "MonthlySeries":
        return cls(name=name, start=start, values=tuple(np.asarray(list(values), dtype=float)))

    @classmethod
    def from_pandas(cls, series: pd.Series, name: Optional[str] = None) -> "MonthlySeries":
        """Build from a pandas Series indexed by monthly periods (must be contiguous)."""
        index = pd.PeriodIndex(series.index, freq="M")
        if len(index) == 0:
            raise DataError("cannot build a monthly series from an empty pandas Series")
        start = MonthIndex(index[0].year, index[0].month)
        expected = pd.period_range(start=index[0], periods=len(index), freq="M")
        if not index.equals(expected):
            raise DataError("pandas index is not a contiguous monthly range")
        return cls.from_array(name or str(series.name), start, series.to_numpy(dtype=float))

    @property
    def end(self) -> MonthIndex:
        return self.start.shift(len(self.values) - 1)

    def __len__(self) -> int:
        return len(self.values)

    def months(self) -> list[MonthIndex]:
        return month_range(self.start, self.end)

    def index_of(self, month: MonthIndex) -> int:
        """Slot position of ``month``; raises if outside the series."""
        position = self.start.months_until(month)
        if not 0 <= position < len(self.values):
            raise DataError(f"month {month} is outside series '{self.name}' ({self.start}..{self.end})")
        return position

    def covers(self, month: MonthIndex) -> bool:
        return 0 <= self.start.months_until(month) < len(self.values)

    def get(self, month: MonthIndex) -> Optional[float]:
        return self.values[self.index_of(month)]

    def to_array(self) -> np.ndarray:
        return np.array([np.nan if v is None else v for v in self.values], dtype=float)

    def to_pandas(self) -> pd.Series:
        index = pd.period_range(start=str(self.start), periods=len(self.values), freq="M")
        return pd.Series(self.to_array(), index=index, name=self.name)

    def missing_count(self) -> int:
        return sum(v is None for v in self.values)

    def window(self, first: MonthIndex, last: MonthIndex) -> "MonthlySeries":
        """Sub-series from ``first`` to ``last`` inclusive (both inside the series)."""
        if last < first:
            raise DataError(f"empty window {first}..{last}")
        lo, hi = self.index_of(first), self.index_of(last)
        return MonthlySeries(self.name, first, self.values[lo:hi + 1])

    def renamed(self, name: str) -> "MonthlySeries":
        return MonthlySeries(name, self.start, self.values)

    def with_values(self, values: Iterable, name: Optional[str] = None) -> "MonthlySeries":
        """Same calendar, new values (array input; NaN becomes missing)."""
        values = tuple(np.asarray(list(values), dtype=float))
        if len(values) != len(self.values):
            raise DataError(f"expected {len(self.values)} values, got {len(values)}")
        return MonthlySeries(name or self.name, self.start, values)

    def __repr__(self) -> str:
        return f"<MonthlySeries '{self.name}' {self.start}..{self.end} n={len(self.values)}>"


def overlap(a: MonthlySeries, b: MonthlySeries) -> Optional[tuple[MonthIndex, MonthIndex]]:
    """Common month range of two series, or None when they do not overlap."""
    first = max(a.start, b.start)
    last = min(a.end, b.end)
    if last < first:
        return None
    return first, last


@dataclass(frozen=True)
class DailyQuote:
    """One trading day of a bond quote: high, low and closing price (or yield)."""

    date: date
    high: float
    low: float
    close: float

    def __post_init__(self):
        for label in ("high", "low", "close"):
            value = float(getattr(self, label))
            if not math.isfinite(value) or value <= 0:
                raise DataError(f"{label} must be a positive number on {self.date}, got {value}")
            object.__setattr__(self, label, value)
        if self.low > self.high:
            raise DataError(f"low {self.low} exceeds high {self.high} on {self.date}")
        if not self.low <= self.close <= self.high:
            raise DataError(f"close {self.close} outside [low, high] on {self.date}")


@dataclass(frozen=True)
class DailyQuoteSeries:
    """Dated quotes in strictly ascending date order."""

    name: str
    quotes: tuple = field(default_factory=tuple)

    def __post_init__(self):
        quotes = tuple(self.quotes)
        for previous, current in zip(quotes, quotes[1:]):
            if current.date <= previous.date:
                raise DataError(f"daily quotes must have unique ascending dates ({previous.date}, {current.date})")
        object.__setattr__(self, "quotes", quotes)

    def __len__(self) -> int:
        return len(self.quotes)

    def dates(self) -> list[date]:
        return [q.date for q in self.quotes]

    def closes(self) -> np.ndarray:
        return np.array([q.close for q in self.quotes], dtype=float)

    def highs(self) -> np.ndarray:
        return np.array([q.high for q in self.quotes], dtype=float)

    def lows(self) -> np.ndarray:
        return np.array([q.low for q in self.quotes], dtype=float)

    def position_on_or_after(self, day: date) -> int:
        """Index of the first trading day on or after ``day``."""
        for i, quote in enumerate(self.quotes):
            if quote.date >= day:
                return i
        raise DataError(f"no trading day on or after {day} in '{self.name}'")

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "date": [q.date.isoformat() for q in self.quotes],
                "high": [q.high for q in self.quotes],
                "low": [q.low for q in self.quotes],
                "close": [q.close for q in self.quotes],
            }
        )


def series_from_values(name: str, start: MonthIndex, values: Sequence[Optional[float]]) -> MonthlySeries:
    """Convenience constructor for literal values (``None`` marks a gap)."""
    return MonthlySeries(name, start, tuple(values))
