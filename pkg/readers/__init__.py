from .base import BaseReader
from .daily import DailyReader, parse_daily_csv, write_daily_csv
from .events import EventReader, parse_event_csv, write_event_csv
from .monthly import MonthlyReader, parse_monthly_csv, write_monthly_csv

__all__ = [
    "BaseReader",
    "DailyReader",
    "EventReader",
    "MonthlyReader",
    "parse_daily_csv",
    "parse_event_csv",
    "parse_monthly_csv",
    "write_daily_csv",
    "write_event_csv",
    "write_monthly_csv",
]
