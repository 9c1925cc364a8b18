"""Reader for daily.csv: date, high, low, close."""

from datetime import date

from models import DailyQuote, DailyQuoteSeries, DataError

from .base import BaseReader


class DailyReader(BaseReader):
    """Reads ISO-dated daily quotes. Rows may come in any order; dates must be unique."""

    file_kind = "daily"
    required_columns = ("date", "high", "low", "close")

    def __init__(self, name: str = "daily"):
        self.name = name

    def read(self, path) -> DailyQuoteSeries:
        frame = self._load_frame(path)
        quotes = []
        seen = {}
        for i, row in enumerate(frame.to_dict("records"), start=1):
            try:
                day = date.fromisoformat(str(row["date"]).strip())
            except ValueError:
                raise DataError(f"cannot parse date '{row['date']}' (expected YYYY-MM-DD)",
                                row=i, column="date") from None
            if day in seen:
                raise DataError(f"duplicate date {day} (first seen on row {seen[day]})", row=i, column="date")
            seen[day] = i
            values = {c: self._parse_float(row[c], i, c, allow_empty=False) for c in ("high", "low", "close")}
            try:
                quotes.append(DailyQuote(day, **values))
            except DataError as e:
                raise DataError(str(e), row=i) from None
        quotes.sort(key=lambda q: q.date)
        return DailyQuoteSeries(self.name, tuple(quotes))


def parse_daily_csv(path, name: str = "daily") -> DailyQuoteSeries:
    return DailyReader(name).read(path)


def write_daily_csv(path, series: DailyQuoteSeries) -> None:
    series.to_frame().to_csv(path, index=False)
