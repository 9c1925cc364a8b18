"""Shared fixtures: small literal series, event catalogs and files on disk."""

from datetime import date, timedelta

import numpy as np
import pytest

from models import DailyQuote, DailyQuoteSeries, EventCatalog, EventRecord, MonthIndex, MonthlySeries


@pytest.fixture
def start():
    return MonthIndex(1820, 1)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def returns_series(start, rng):
    """240 months of iid normal returns."""
    return MonthlySeries.from_array("yield_return", start, rng.normal(0.0, 0.01, 240))


@pytest.fixture
def catalog(start):
    return EventCatalog((
        EventRecord("e1", "collective", "imperial", start.shift(100), 2,
                    frozenset({"ukraine"}), versts=852.2, oblast_size_km2=50000.0, density_per_km2=20.0),
        EventRecord("e2", "attempted_assassination", "homeland", start.shift(150), 1,
                    frozenset({"muscovy"}), distance_km=100.0, oblast_size_km2=30000.0, density_per_km2=40.0),
        EventRecord("e3", "external", "external_border", start.shift(101), 3),
        EventRecord("e4", "collective", "imperial", start.shift(200), 1,
                    frozenset({"caucasus_rebellion"}), distance_km=2000.0),
    ))


@pytest.fixture
def monthly_csv(tmp_path):
    path = tmp_path / "monthly.csv"
    path.write_text(
        "Date,Yield,Benchmark\n"
        "1820-01,5.0,3.0\n"
        "1820-02,5.1,3.1\n"
        "1820-04,5.3,\n"
        "1820-03,5.2,3.2\n",
        encoding="utf-8",
    )
    return path


@pytest.fixture
def events_csv(tmp_path):
    path = tmp_path / "events.csv"
    path.write_text(
        "id,kind,location_class,region_tags,start,duration_months,versts,distance_km,oblast_size_km2,density_per_km2\n"
        "a,collective,imperial,ukraine,1820-02,2,852.2,,1000,10\n"
        "b,Attempted Assassination,homeland,muscovy,1820-03,1,,50,,\n"
        "c,external,external_border,,1820-01,1,,,,\n",
        encoding="utf-8",
    )
    return path


def make_daily(days: int, first: date = date(1850, 1, 1), closes=None) -> DailyQuoteSeries:
    """Weekday quotes with a 1% high/low band around ``closes`` (default flat 100)."""
    closes = np.full(days, 100.0) if closes is None else np.asarray(closes, dtype=float)
    quotes, day = [], first
    for close in closes:
        while day.weekday() >= 5:
            day += timedelta(days=1)
        quotes.append(DailyQuote(day, close * 1.005, close * 0.995, close))
        day += timedelta(days=1)
    return DailyQuoteSeries("daily", tuple(quotes))
