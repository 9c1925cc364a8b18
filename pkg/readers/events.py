"""Reader and writer for events.csv."""

from pathlib import Path

import pandas as pd

from models import DataError, EventCatalog, EventRecord, MonthIndex
from models.event import EVENT_COLUMNS

from .base import BaseReader

OPTIONAL_NUMERIC = ("versts", "distance_km", "oblast_size_km2", "density_per_km2")


class EventReader(BaseReader):
    """
    Reads the event catalog.

    Region tags sit in one cell separated by ``;``. Kind and location labels
    are matched case-insensitively, with spaces or dashes read as underscores.
    """

    file_kind = "events"
    required_columns = ("id", "kind", "location_class", "start", "duration_months")
    allow_empty = True

    def read(self, path) -> EventCatalog:
        frame = self._load_frame(path)
        records = []
        seen = {}
        for i, row in enumerate(frame.to_dict("records"), start=1):
            record = self._parse_row(row, i)
            if record.id in seen:
                raise DataError(f"duplicate event id '{record.id}' (first seen on row {seen[record.id]})",
                                row=i, column="id")
            seen[record.id] = i
            records.append(record)
        return EventCatalog(tuple(records))

    def _parse_row(self, row: dict, i: int) -> EventRecord:
        event_id = str(row["id"]).strip()
        if not event_id:
            raise DataError("empty event id", row=i, column="id")
        try:
            start = MonthIndex.parse(row["start"])
        except DataError as e:
            raise DataError(str(e), row=i, column="start") from None
        numerics = {
            column: self._parse_float(row.get(column, ""), i, column)
            for column in OPTIONAL_NUMERIC
        }
        try:
            return EventRecord(
                id=event_id,
                kind=_label(row["kind"]),
                location_class=_label(row["location_class"]),
                start=start,
                duration_months=self._parse_int(row["duration_months"], i, "duration_months"),
                region_tags=frozenset(t for t in str(row.get("region_tags", "")).split(";") if t.strip()),
                **numerics,
            )
        except DataError as e:
            if e.row is not None:
                raise
            raise DataError(str(e), row=i) from None


def _label(cell: str) -> str:
    return str(cell).strip().lower().replace(" ", "_").replace("-", "_")


def parse_event_csv(path) -> EventCatalog:
    return EventReader().read(path)


def write_event_csv(path, catalog: EventCatalog) -> None:
    """Write a catalog in the layout ``parse_event_csv`` reads back."""
    frame = catalog.to_frame()
    if frame.empty:
        frame = pd.DataFrame(columns=EVENT_COLUMNS)
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False)
