"""Regressor construction from event catalogs and monthly series."""

import math
from typing import Optional

import numpy as np
from statsmodels.tsa.filters.bk_filter import bkfilter

from models import (
    ANY_EVENT,
    DataError,
    EventCatalog,
    EventFilter,
    EventRecord,
    LocationClass,
    MonthIndex,
    MonthlySeries,
    month_range,
)

VERST_KM = 1.0668
DISTANCE_MODES = ("raw_km", "log_km")
LOCATED = EventFilter(locations=frozenset({LocationClass.HOMELAND, LocationClass.IMPERIAL}))


def _check_range(first: MonthIndex, last: MonthIndex) -> list[MonthIndex]:
    if last < first:
        raise DataError(f"empty month range {first}..{last}")
    return month_range(first, last)


def _active(catalog: EventCatalog, month: MonthIndex, event_filter: EventFilter = ANY_EVENT) -> list[EventRecord]:
    return [r for r in catalog if r.is_active(month) and event_filter.matches(r)]


def event_dummies(catalog: EventCatalog, first: MonthIndex, last: MonthIndex,
                  event_filter: EventFilter = ANY_EVENT, name: Optional[str] = None) -> MonthlySeries:
    """1 in every active month of a matching event, else 0."""
    months = _check_range(first, last)
    values = np.zeros(len(months))
    for record in catalog:
        if not event_filter.matches(record):
            continue
        lo = max(first.months_until(record.start), 0)
        hi = min(first.months_until(record.end), len(months) - 1)
        if lo <= hi:
            values[lo:hi + 1] = 1.0
    return MonthlySeries.from_array(name or f"dummy[{event_filter}]", first, values)


def cumulative_count(dummy: MonthlySeries, window: int = 12, name: Optional[str] = None) -> MonthlySeries:
    """
    Event-month count over the current and prior ``window - 1`` months,
    reported only in event months (0 elsewhere).

    Months before the series start count as non-event months. A missing
    current month gives a missing output; in an event month a missing slot
    in the look-back does too. Non-event months are 0 regardless.
    """
    values = dummy.to_array()
    present = values[~np.isnan(values)]
    if not np.isin(present, (0.0, 1.0)).all():
        raise DataError(f"cumulative_count needs a 0/1 series, '{dummy.name}' has other values")
    padded = np.concatenate([np.zeros(window - 1), values])
    out = np.empty(len(values))
    for t in range(len(values)):
        block = padded[t:t + window]
        if block[-1] == 0:
            out[t] = 0.0
        else:
            out[t] = np.nan if np.isnan(block).any() else block.sum()
    return dummy.with_values(out, name=name or f"{dummy.name}_count")


def multiple_events_dummy(catalog: EventCatalog, first: MonthIndex, last: MonthIndex,
                          name: str = "multiple_events") -> MonthlySeries:
    """1 in months where at least two distinct event kinds are active."""
    months = _check_range(first, last)
    values = [1.0 if len({r.kind for r in _active(catalog, m)}) >= 2 else 0.0 for m in months]
    return MonthlySeries.from_array(name, first, values)


def interaction_dummy(focal: EventFilter, catalog: EventCatalog, first: MonthIndex, last: MonthIndex,
                      name: Optional[str] = None) -> MonthlySeries:
    """1 in months where a focal event and an event of another kind are both active."""
    months = _check_range(first, last)
    values = []
    for month in months:
        active = _active(catalog, month)
        focal_kinds = {r.kind for r in active if focal.matches(r)}
        values.append(1.0 if focal_kinds and any(r.kind not in focal_kinds for r in active) else 0.0)
    return MonthlySeries.from_array(name or f"interaction[{focal}]", first, values)


def versts_to_km(v: float) -> float:
    if v < 0:
        raise DataError(f"distance in versts must be >= 0, got {v}")
    return v * VERST_KM


def event_km(record: EventRecord) -> float:
    if record.distance_km is not None:
        return record.distance_km
    if record.versts is not None:
        return versts_to_km(record.versts)
    raise DataError(f"event {record.id} has neither distance_km nor versts")


def distance_feature(record: EventRecord, mode: str = "raw_km") -> float:
    """Kilometres from the capital, raw or logged."""
    if mode not in DISTANCE_MODES:
        raise DataError(f"unknown distance mode '{mode}' (use {', '.join(DISTANCE_MODES)})")
    km = event_km(record)
    if mode == "raw_km":
        return km
    if km <= 0:
        raise DataError(f"log distance undefined for event {record.id} at {km} km")
    return math.log(km)


def baxter_king_weights(low_period: float, high_period: float, K: int) -> np.ndarray:
    """
    Symmetric band-pass weights w_{-K..K}, adjusted to sum to zero.

    b_0 = (w2 - w1)/pi, b_j = (sin(w2 j) - sin(w1 j))/(pi j), with
    w1 = 2pi/high_period and w2 = 2pi/low_period.
    """
    if not 2 <= low_period < high_period:
        raise DataError(f"Baxter-King needs 2 <= low_period < high_period, got {low_period}, {high_period}")
    if K < 1:
        raise DataError(f"Baxter-King truncation must be >= 1, got {K}")
    omega_1 = 2.0 * np.pi / high_period
    omega_2 = 2.0 * np.pi / low_period
    j = np.arange(1, K + 1)
    side = (np.sin(omega_2 * j) - np.sin(omega_1 * j)) / (np.pi * j)
    weights = np.concatenate([side[::-1], [(omega_2 - omega_1) / np.pi], side])
    return weights - weights.mean()


def baxter_king(s: MonthlySeries, low_period: float = 2, high_period: float = 8, K: int = 3,
                name: Optional[str] = None) -> MonthlySeries:
    """Band-pass filtered series; the first and last K slots are missing."""
    baxter_king_weights(low_period, high_period, K)
    values = s.to_array()
    if len(values) <= 2 * K:
        raise DataError(f"series '{s.name}' has {len(values)} slots, Baxter-King with K={K} needs more than {2 * K}")
    if np.isnan(values).any():
        raise DataError(f"Baxter-King filter needs a complete series, '{s.name}' has {s.missing_count()} gaps")
    out = np.full(len(values), np.nan)
    out[K:len(values) - K] = np.asarray(bkfilter(values, low=low_period, high=high_period, K=K)).ravel()
    return s.with_values(out, name=name or f"{s.name}_bk")


def lag(s: MonthlySeries, k: int = 1, name: Optional[str] = None) -> MonthlySeries:
    """Value at t is the input at t-k; the first k slots are missing."""
    if k < 1:
        raise DataError(f"lag must be >= 1, got {k}")
    values = s.to_array()
    out = np.full(len(values), np.nan)
    out[k:] = values[:-k] if k < len(values) else []
    return s.with_values(out, name=name or f"{s.name}_lag{k}")


def lead(s: MonthlySeries, k: int = 1, name: Optional[str] = None) -> MonthlySeries:
    """Value at t is the input at t+k; the last k slots are missing."""
    if k < 1:
        raise DataError(f"lead must be >= 1, got {k}")
    values = s.to_array()
    out = np.full(len(values), np.nan)
    out[:-k] = values[k:] if k < len(values) else []
    return s.with_values(out, name=name or f"{s.name}_lead{k}")


def event_attribute_series(catalog: EventCatalog, first: MonthIndex, last: MonthIndex, attribute: str,
                           event_filter: EventFilter = LOCATED, name: Optional[str] = None) -> MonthlySeries:
    """
    Monthly mean of an event attribute over active matching events.

    ``attribute`` is a numeric EventRecord field, or ``km`` for the distance
    in kilometres. Months without a matching event carrying the value are
    missing.
    """
    months = _check_range(first, last)
    values = []
    for month in months:
        found = []
        for record in _active(catalog, month, event_filter):
            if attribute == "km":
                if record.distance_km is not None or record.versts is not None:
                    found.append(event_km(record))
            else:
                value = getattr(record, attribute, None)
                if value is not None:
                    found.append(float(value))
        values.append(np.mean(found) if found else np.nan)
    return MonthlySeries.from_array(name or attribute, first, values)


def located_distance_series(catalog: EventCatalog, first: MonthIndex, last: MonthIndex,
                            mode: str = "raw_km", name: str = "distance") -> MonthlySeries:
    """Mean distance of active homeland or imperial events; missing in other months."""
    km = event_attribute_series(catalog, first, last, "km", LOCATED, name=name)
    if mode == "raw_km":
        return km
    if mode != "log_km":
        raise DataError(f"unknown distance mode '{mode}' (use {', '.join(DISTANCE_MODES)})")
    values = km.to_array()
    if np.any(values[~np.isnan(values)] <= 0):
        raise DataError("log distance undefined for a 0 km event")
    return km.with_values(np.log(values))


def selection_indicator(catalog: EventCatalog, first: MonthIndex, last: MonthIndex,
                        name: str = "selected") -> MonthlySeries:
    """1 in months with an active homeland or imperial event."""
    return event_dummies(catalog, first, last, LOCATED, name=name)
