"""Gregorian month index."""

import re
from dataclasses import dataclass

from .errors import DataError

_MONTH_RE = re.compile(r"^(\d{4})-(\d{2})$")


@dataclass(frozen=True, order=True)
class MonthIndex:
    """A calendar month. Ordered by (year, month)."""

    year: int
    month: int

    def __post_init__(self):
        if not 1 <= self.month <= 12:
            raise DataError(f"month must be in 1..12, got {self.month}")

    @classmethod
    def parse(cls, text: str) -> "MonthIndex":
        """Parse ``YYYY-MM``. Also accepts a full ISO date and drops the day."""
        text = str(text).strip()
        if len(text) == 10 and text[4] == "-" and text[7] == "-":
            text = text[:7]
        match = _MONTH_RE.match(text)
        if not match:
            raise DataError(f"cannot parse month '{text}' (expected YYYY-MM)")
        return cls(int(match.group(1)), int(match.group(2)))

    @classmethod
    def from_ordinal(cls, ordinal: int) -> "MonthIndex":
        year, month0 = divmod(ordinal, 12)
        return cls(year, month0 + 1)

    @property
    def ordinal(self) -> int:
        """Months since year 0, used for arithmetic."""
        return self.year * 12 + self.month - 1

    def shift(self, months: int) -> "MonthIndex":
        return MonthIndex.from_ordinal(self.ordinal + months)

    def succ(self) -> "MonthIndex":
        return self.shift(1)

    def pred(self) -> "MonthIndex":
        return self.shift(-1)

    def months_until(self, other: "MonthIndex") -> int:
        """Signed number of months from self to ``other``."""
        return other.ordinal - self.ordinal

    def __str__(self) -> str:
        return f"{self.year:04d}-{self.month:02d}"


def month_range(first: MonthIndex, last: MonthIndex) -> list[MonthIndex]:
    """Inclusive list of months from ``first`` to ``last``."""
    return [MonthIndex.from_ordinal(o) for o in range(first.ordinal, last.ordinal + 1)]
