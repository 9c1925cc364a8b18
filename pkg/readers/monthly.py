"""Reader for monthly.csv: a date column followed by named numeric columns."""

from pathlib import Path
from typing import Optional

import pandas as pd

from models import DataError, MonthIndex, MonthlySeries

from .base import BaseReader


class MonthlyReader(BaseReader):
    """
    Reads ``date`` (YYYY-MM) plus numeric columns into MonthlySeries.

    Usage:
        reader = MonthlyReader(schema={"yield_ru": "yield", "yield_uk": "benchmark"})
        series = reader.read("data/monthly.csv")
    """

    file_kind = "monthly"
    required_columns = ("date",)

    def __init__(self, schema: Optional[dict] = None):
        """
        Args:
            schema: Map of CSV column -> series name. None reads every
                non-date column under its own name.
        """
        self.schema = {str(k).strip().lower(): str(v).strip().lower() for k, v in schema.items()} if schema else None

    def read(self, path) -> dict[str, MonthlySeries]:
        frame = self._load_frame(path)
        columns = self.schema or {c: c for c in frame.columns if c != "date"}
        missing = [c for c in columns if c not in frame.columns]
        if missing:
            raise DataError(f"monthly file {Path(path)} has no column(s) {', '.join(missing)}")
        if not columns:
            raise DataError(f"monthly file {Path(path)} has no value columns")

        months = []
        seen = {}
        for i, cell in enumerate(frame["date"], start=1):
            month = self._parse_month(cell, i)
            if month in seen:
                raise DataError(f"duplicate month {month} (first seen on row {seen[month]})", row=i, column="date")
            seen[month] = i
            months.append(month)

        order = sorted(range(len(months)), key=lambda k: months[k])
        first, last = months[order[0]], months[order[-1]]
        length = first.months_until(last) + 1

        result = {}
        for column, name in columns.items():
            slots = [None] * length
            for k in order:
                slots[first.months_until(months[k])] = self._parse_float(frame[column].iat[k], k + 1, column)
            result[name] = MonthlySeries(name, first, tuple(slots))
        return result

    @staticmethod
    def _parse_month(cell: str, row: int) -> MonthIndex:
        try:
            return MonthIndex.parse(cell)
        except DataError as e:
            raise DataError(str(e), row=row, column="date") from None


def parse_monthly_csv(path, schema: Optional[dict] = None) -> dict[str, MonthlySeries]:
    """One MonthlySeries per mapped column; months absent from the file become gaps."""
    return MonthlyReader(schema).read(path)


def write_monthly_csv(path, series: list[MonthlySeries]) -> None:
    """Write series on their common calendar span (gaps as empty cells)."""
    if not series:
        raise DataError("nothing to write")
    frame = pd.concat([s.to_pandas() for s in series], axis=1)
    frame = frame.sort_index()
    full = pd.period_range(frame.index.min(), frame.index.max(), freq="M")
    frame = frame.reindex(full)
    frame.index = [str(p) for p in frame.index]
    frame.index.name = "date"
    frame.to_csv(path)
