"""On-disk workspace shared by the commands."""

import json
from pathlib import Path
from typing import Optional

from models import DailyQuoteSeries, DataError, EventCatalog, MonthlySeries
from readers import (
    parse_daily_csv,
    parse_event_csv,
    parse_monthly_csv,
    write_daily_csv,
    write_event_csv,
    write_monthly_csv,
)

MONTHLY_FILE = "data/monthly.csv"
EVENTS_FILE = "data/events.csv"
DAILY_FILE = "data/daily.csv"
FEATURES_FILE = "data/features.csv"
INGEST_REPORT = "ingest_report.json"
MANIFEST = "manifest.json"
REPORTS_DIR = "reports"


def save_json(path: Path, data) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=2, ensure_ascii=False, sort_keys=True)
        f.write("\n")


def load_json(path: Path):
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


class Workspace:
    """
    Directory holding normalized inputs, derived features and reports.

    Layout::

        data/monthly.csv  data/events.csv  data/daily.csv  data/features.csv
        ingest_report.json  manifest.json  reports/
    """

    def __init__(self, root):
        self.root = Path(root)

    def path(self, relative: str) -> Path:
        return self.root / relative

    def require(self, relative: str, produced_by: str) -> Path:
        path = self.path(relative)
        if not path.exists():
            raise DataError(f"workspace {self.root} has no {relative}; run '{produced_by}' first")
        return path

    # Inputs

    def save_inputs(self, monthly: dict[str, MonthlySeries], catalog: EventCatalog,
                    daily: Optional[DailyQuoteSeries] = None) -> None:
        self.path("data").mkdir(parents=True, exist_ok=True)
        write_monthly_csv(self.path(MONTHLY_FILE), list(monthly.values()))
        write_event_csv(self.path(EVENTS_FILE), catalog)
        daily_path = self.path(DAILY_FILE)
        if daily is not None:
            write_daily_csv(daily_path, daily)
        elif daily_path.exists():
            daily_path.unlink()

    def monthly(self) -> dict[str, MonthlySeries]:
        return parse_monthly_csv(self.require(MONTHLY_FILE, "ingest"))

    def events(self) -> EventCatalog:
        return parse_event_csv(self.require(EVENTS_FILE, "ingest"))

    def daily(self) -> DailyQuoteSeries:
        return parse_daily_csv(self.require(DAILY_FILE, "ingest"))

    def has_daily(self) -> bool:
        return self.path(DAILY_FILE).exists()

    # Features

    def save_features(self, columns: list[MonthlySeries]) -> None:
        write_monthly_csv(self.path(FEATURES_FILE), columns)

    def features(self) -> dict[str, MonthlySeries]:
        return parse_monthly_csv(self.require(FEATURES_FILE, "features"))

    def columns(self) -> dict[str, MonthlySeries]:
        """Ingested monthly columns plus derived features (features win on a name clash)."""
        columns = self.monthly()
        if self.path(FEATURES_FILE).exists():
            columns.update(self.features())
        return columns

    def column(self, name: str, columns: Optional[dict] = None) -> MonthlySeries:
        columns = self.columns() if columns is None else columns
        name = name.strip().lower()
        if name not in columns:
            raise DataError(f"unknown series '{name}' (workspace has: {', '.join(sorted(columns))})")
        return columns[name]

    # Reports

    def report_path(self, name: str) -> Path:
        path = self.path(REPORTS_DIR) / name
        path.parent.mkdir(parents=True, exist_ok=True)
        return path

    def reports(self, suffix: str = ".txt") -> list[Path]:
        directory = self.path(REPORTS_DIR)
        if not directory.exists():
            return []
        return sorted(p for p in directory.iterdir() if p.suffix == suffix)

    def save_json(self, relative: str, data) -> Path:
        path = self.path(relative)
        save_json(path, data)
        return path

    def load_json(self, relative: str, produced_by: str):
        return load_json(self.require(relative, produced_by))
