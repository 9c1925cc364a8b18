"""Event records and catalogs."""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, Optional

import pandas as pd

from .calendar import MonthIndex
from .errors import DataError


class EventKind(str, Enum):
    ATTEMPTED_ASSASSINATION = "attempted_assassination"
    SUCCESSFUL_ASSASSINATION = "successful_assassination"
    COLLECTIVE = "collective"
    EXTERNAL = "external"


class LocationClass(str, Enum):
    HOMELAND = "homeland"
    IMPERIAL = "imperial"
    EXTERNAL_BORDER = "external_border"


REGION_TAGS = frozenset({"ukraine", "muscovy", "other_imperial", "caucasus_rebellion", "caucasus_war"})

# Tags that place an event inside the empire. External events never carry them.
HOMELAND_TAGS = frozenset({"muscovy"})
IMPERIAL_TAGS = frozenset({"ukraine", "other_imperial", "caucasus_rebellion"})

EVENT_COLUMNS = [
    "id", "kind", "location_class", "region_tags", "start", "duration_months",
    "versts", "distance_km", "oblast_size_km2", "density_per_km2",
]


def _optional_non_negative(label: str, value) -> Optional[float]:
    if value is None:
        return None
    value = float(value)
    if math.isnan(value):
        return None
    if not math.isfinite(value) or value < 0:
        raise DataError(f"{label} must be a finite number >= 0, got {value}")
    return value


@dataclass(frozen=True)
class EventRecord:
    """One dated, typed, located unrest event."""

    id: str
    kind: EventKind
    location_class: LocationClass
    start: MonthIndex
    duration_months: int = 1
    region_tags: frozenset = field(default_factory=frozenset)
    distance_km: Optional[float] = None
    versts: Optional[float] = None
    oblast_size_km2: Optional[float] = None
    density_per_km2: Optional[float] = None

    def __post_init__(self):
        if not str(self.id).strip():
            raise DataError("event id must not be empty")
        try:
            object.__setattr__(self, "kind", EventKind(self.kind))
        except ValueError:
            raise DataError(f"unknown event kind '{self.kind}' for event {self.id}") from None
        try:
            object.__setattr__(self, "location_class", LocationClass(self.location_class))
        except ValueError:
            raise DataError(f"unknown location class '{self.location_class}' for event {self.id}") from None
        if int(self.duration_months) != self.duration_months or self.duration_months < 1:
            raise DataError(f"duration_months must be an integer >= 1 for event {self.id}, got {self.duration_months}")
        object.__setattr__(self, "duration_months", int(self.duration_months))

        tags = frozenset(str(t).strip().lower() for t in self.region_tags if str(t).strip())
        unknown = tags - REGION_TAGS
        if unknown:
            raise DataError(f"unknown region tags {sorted(unknown)} for event {self.id}")
        if self.is_external and tags & (HOMELAND_TAGS | IMPERIAL_TAGS):
            raise DataError(
                f"external event {self.id} cannot carry homeland/imperial tags {sorted(tags & (HOMELAND_TAGS | IMPERIAL_TAGS))}"
            )
        object.__setattr__(self, "region_tags", tags)

        for label in ("distance_km", "versts", "oblast_size_km2", "density_per_km2"):
            object.__setattr__(self, label, _optional_non_negative(f"{label} of event {self.id}", getattr(self, label)))

    @property
    def is_external(self) -> bool:
        return self.kind is EventKind.EXTERNAL or self.location_class is LocationClass.EXTERNAL_BORDER

    @property
    def is_located(self) -> bool:
        """Homeland or imperial events, the ones with a meaningful distance."""
        return self.location_class in (LocationClass.HOMELAND, LocationClass.IMPERIAL)

    @property
    def end(self) -> MonthIndex:
        return self.start.shift(self.duration_months - 1)

    def is_active(self, month: MonthIndex) -> bool:
        return self.start <= month <= self.end

    def active_months(self) -> list[MonthIndex]:
        return [self.start.shift(k) for k in range(self.duration_months)]

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind.value,
            "location_class": self.location_class.value,
            "region_tags": ";".join(sorted(self.region_tags)),
            "start": str(self.start),
            "duration_months": self.duration_months,
            "versts": self.versts,
            "distance_km": self.distance_km,
            "oblast_size_km2": self.oblast_size_km2,
            "density_per_km2": self.density_per_km2,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "EventRecord":
        tags = data.get("region_tags") or ""
        if isinstance(tags, str):
            tags = [t for t in tags.split(";") if t.strip()]
        start = data["start"]
        if not isinstance(start, MonthIndex):
            start = MonthIndex.parse(start)
        return cls(
            id=str(data["id"]).strip(),
            kind=data["kind"],
            location_class=data["location_class"],
            start=start,
            duration_months=data.get("duration_months", 1),
            region_tags=frozenset(tags),
            distance_km=data.get("distance_km"),
            versts=data.get("versts"),
            oblast_size_km2=data.get("oblast_size_km2"),
            density_per_km2=data.get("density_per_km2"),
        )

    def __str__(self) -> str:
        return f"[{self.id}] {self.kind.value}/{self.location_class.value} {self.start} x{self.duration_months}"


@dataclass(frozen=True)
class EventFilter:
    """
    Predicate over event records.

    Empty sets mean "any". ``tags`` matches when the record carries at least
    one of them, ``exclude_tags`` rejects records carrying any of them.

    Text form used by config files::

        kind=collective,external; location=imperial; tag=ukraine; exclude=caucasus_war
    """

    kinds: frozenset = field(default_factory=frozenset)
    locations: frozenset = field(default_factory=frozenset)
    tags: frozenset = field(default_factory=frozenset)
    exclude_tags: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        try:
            object.__setattr__(self, "kinds", frozenset(EventKind(k) for k in self.kinds))
            object.__setattr__(self, "locations", frozenset(LocationClass(loc) for loc in self.locations))
        except ValueError as e:
            raise DataError(f"invalid event filter: {e}") from None
        for label in ("tags", "exclude_tags"):
            tags = frozenset(str(t).strip().lower() for t in getattr(self, label))
            if tags - REGION_TAGS:
                raise DataError(f"invalid event filter: unknown region tags {sorted(tags - REGION_TAGS)}")
            object.__setattr__(self, label, tags)

    @classmethod
    def parse(cls, text: str) -> "EventFilter":
        fields = {"kind": set(), "location": set(), "tag": set(), "exclude": set()}
        for part in str(text).split(";"):
            part = part.strip()
            if not part:
                continue
            if "=" not in part:
                raise DataError(f"invalid event filter clause '{part}' (expected key=value)")
            key, _, value = part.partition("=")
            key = key.strip().lower()
            if key not in fields:
                raise DataError(f"invalid event filter key '{key}' (use kind, location, tag, exclude)")
            fields[key].update(v.strip().lower() for v in value.split(",") if v.strip())
        return cls(
            kinds=frozenset(fields["kind"]),
            locations=frozenset(fields["location"]),
            tags=frozenset(fields["tag"]),
            exclude_tags=frozenset(fields["exclude"]),
        )

    def matches(self, record: EventRecord) -> bool:
        if self.kinds and record.kind not in self.kinds:
            return False
        if self.locations and record.location_class not in self.locations:
            return False
        if self.tags and not (record.region_tags & self.tags):
            return False
        if self.exclude_tags and (record.region_tags & self.exclude_tags):
            return False
        return True

    def __str__(self) -> str:
        parts = []
        if self.kinds:
            parts.append("kind=" + ",".join(sorted(k.value for k in self.kinds)))
        if self.locations:
            parts.append("location=" + ",".join(sorted(loc.value for loc in self.locations)))
        if self.tags:
            parts.append("tag=" + ",".join(sorted(self.tags)))
        if self.exclude_tags:
            parts.append("exclude=" + ",".join(sorted(self.exclude_tags)))
        return "; ".join(parts) or "any"


ANY_EVENT = EventFilter()


@dataclass(frozen=True)
class EventCatalog:
    """An immutable collection of event records with unique ids."""

    records: tuple = field(default_factory=tuple)

    def __post_init__(self):
        records = tuple(self.records)
        seen = set()
        for record in records:
            if record.id in seen:
                raise DataError(f"duplicate event id '{record.id}'")
            seen.add(record.id)
        object.__setattr__(self, "records", records)

    def __iter__(self) -> Iterator[EventRecord]:
        return iter(self.records)

    def __len__(self) -> int:
        return len(self.records)

    def select(self, event_filter: EventFilter) -> "EventCatalog":
        return EventCatalog(tuple(r for r in self.records if event_filter.matches(r)))

    def union(self, other: "EventCatalog") -> "EventCatalog":
        """Merge two catalogs. Identical records are kept once; a clashing id is an error."""
        by_id = {r.id: r for r in self.records}
        merged = list(self.records)
        for record in other:
            existing = by_id.get(record.id)
            if existing is None:
                by_id[record.id] = record
                merged.append(record)
            elif existing != record:
                raise DataError(f"event id '{record.id}' appears with different contents")
        return EventCatalog(tuple(merged))

    def event_months(self, event_filter: EventFilter = ANY_EVENT) -> list[MonthIndex]:
        """Start months of matching events, in catalog order."""
        return [r.start for r in self.records if event_filter.matches(r)]

    def event_month_count(self, event_filter: EventFilter = ANY_EVENT) -> int:
        """Total event-months (sum of durations) of matching events."""
        return sum(r.duration_months for r in self.records if event_filter.matches(r))

    def validate_within(self, first: MonthIndex, last: MonthIndex) -> None:
        """Every event-month must fall inside ``first..last``."""
        for record in self.records:
            if record.start < first or record.end > last:
                raise DataError(f"event {record.id} ({record.start}..{record.end}) falls outside {first}..{last}")

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([r.to_dict() for r in self.records], columns=EVENT_COLUMNS)

    @classmethod
    def from_records(cls, records: Iterable[EventRecord]) -> "EventCatalog":
        return cls(tuple(records))
