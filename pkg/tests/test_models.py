"""Tests for the domain types in models/."""

from datetime import date

import numpy as np
import pandas as pd
import pytest

from models import (
    ANY_EVENT,
    DailyQuote,
    DailyQuoteSeries,
    DataError,
    DesignMatrix,
    EventCatalog,
    EventFilter,
    EventKind,
    EventRecord,
    EventStudySpec,
    MonthIndex,
    MonthlySeries,
    Role,
    month_range,
    overlap,
    series_from_values,
    significance_stars,
)


class TestMonthIndex:
    def test_parse_and_format(self):
        month = MonthIndex.parse("1854-03")
        assert (month.year, month.month) == (1854, 3)
        assert str(month) == "1854-03"

    def test_parse_drops_day_of_iso_date(self):
        assert MonthIndex.parse("1854-03-17") == MonthIndex(1854, 3)

    @pytest.mark.parametrize("text", ["1854/03", "March 1854", "1854-13", "", "1854-3", "-1854-03", "854-03", "1854-003"])
    def test_parse_rejects_malformed(self, text):
        with pytest.raises(DataError):
            MonthIndex.parse(text)

    def test_shift_crosses_year(self):
        assert MonthIndex(1820, 11).shift(3) == MonthIndex(1821, 2)
        assert MonthIndex(1821, 2).shift(-3) == MonthIndex(1820, 11)
        assert MonthIndex(1820, 12).succ() == MonthIndex(1821, 1)
        assert MonthIndex(1821, 1).pred() == MonthIndex(1820, 12)

    def test_months_until_is_signed(self):
        a, b = MonthIndex(1820, 1), MonthIndex(1821, 3)
        assert a.months_until(b) == 14
        assert b.months_until(a) == -14

    def test_ordering(self):
        assert MonthIndex(1820, 12) < MonthIndex(1821, 1)

    def test_month_range_inclusive(self):
        months = month_range(MonthIndex(1820, 11), MonthIndex(1821, 2))
        assert [str(m) for m in months] == ["1820-11", "1820-12", "1821-01", "1821-02"]


class TestMonthlySeries:
    def test_nan_becomes_missing(self, start):
        s = MonthlySeries.from_array("x", start, [1.0, np.nan, 3.0])
        assert s.values == (1.0, None, 3.0)
        assert s.missing_count() == 1
        assert np.isnan(s.to_array()[1])

    def test_infinite_value_rejected(self, start):
        with pytest.raises(DataError):
            MonthlySeries.from_array("x", start, [1.0, np.inf])

    def test_end_and_covers(self, start):
        s = series_from_values("x", start, [1, 2, 3])
        assert s.end == start.shift(2)
        assert s.covers(start.shift(2))
        assert not s.covers(start.shift(3))

    def test_get_outside_raises(self, start):
        s = series_from_values("x", start, [1, 2, 3])
        with pytest.raises(DataError, match="outside"):
            s.get(start.shift(5))

    def test_window(self, start):
        s = series_from_values("x", start, [1, 2, 3, 4, 5])
        w = s.window(start.shift(1), start.shift(3))
        assert w.start == start.shift(1)
        assert w.values == (2.0, 3.0, 4.0)

    def test_pandas_round_trip_keeps_calendar(self, start):
        s = series_from_values("x", start, [1.0, None, 3.0])
        back = MonthlySeries.from_pandas(s.to_pandas())
        assert back == s

    def test_from_pandas_rejects_gappy_index(self):
        index = pd.PeriodIndex(["1820-01", "1820-03"], freq="M")
        with pytest.raises(DataError, match="contiguous"):
            MonthlySeries.from_pandas(pd.Series([1.0, 2.0], index=index), name="x")

    def test_with_values_length_checked(self, start):
        s = series_from_values("x", start, [1, 2, 3])
        with pytest.raises(DataError):
            s.with_values([1.0, 2.0])

    def test_overlap(self, start):
        a = series_from_values("a", start, [1] * 10)
        b = series_from_values("b", start.shift(5), [1] * 10)
        assert overlap(a, b) == (start.shift(5), start.shift(9))
        c = series_from_values("c", start.shift(20), [1])
        assert overlap(a, c) is None


class TestDailyQuotes:
    def test_low_above_high_rejected(self):
        with pytest.raises(DataError, match="exceeds"):
            DailyQuote(date(1850, 1, 2), high=99.0, low=100.0, close=99.5)

    def test_close_outside_band_rejected(self):
        with pytest.raises(DataError):
            DailyQuote(date(1850, 1, 2), high=101.0, low=99.0, close=102.0)

    def test_dates_must_ascend(self):
        q1 = DailyQuote(date(1850, 1, 3), 101.0, 99.0, 100.0)
        q2 = DailyQuote(date(1850, 1, 2), 101.0, 99.0, 100.0)
        with pytest.raises(DataError, match="ascending"):
            DailyQuoteSeries("d", (q1, q2))

    def test_position_on_or_after_skips_weekend(self):
        quotes = (
            DailyQuote(date(1850, 1, 4), 101.0, 99.0, 100.0),  # Friday
            DailyQuote(date(1850, 1, 7), 101.0, 99.0, 100.0),  # Monday
        )
        series = DailyQuoteSeries("d", quotes)
        assert series.position_on_or_after(date(1850, 1, 5)) == 1
        with pytest.raises(DataError):
            series.position_on_or_after(date(1850, 2, 1))


class TestEventRecord:
    def test_labels_are_normalized(self, start):
        record = EventRecord("x", "collective", "imperial", start, 2, frozenset({"Ukraine"}))
        assert record.kind is EventKind.COLLECTIVE
        assert record.region_tags == frozenset({"ukraine"})
        assert record.end == start.shift(1)
        assert record.active_months() == [start, start.shift(1)]

    def test_unknown_kind_rejected(self, start):
        with pytest.raises(DataError, match="unknown event kind"):
            EventRecord("x", "riot", "imperial", start)

    def test_zero_duration_rejected(self, start):
        with pytest.raises(DataError):
            EventRecord("x", "collective", "imperial", start, 0)

    def test_external_event_cannot_carry_imperial_tag(self, start):
        with pytest.raises(DataError, match="external"):
            EventRecord("x", "external", "external_border", start, 1, frozenset({"ukraine"}))

    def test_negative_distance_rejected(self, start):
        with pytest.raises(DataError):
            EventRecord("x", "collective", "imperial", start, versts=-1.0)

    def test_dict_round_trip(self, catalog):
        for record in catalog:
            assert EventRecord.from_dict(record.to_dict()) == record


class TestEventFilter:
    def test_parse(self):
        f = EventFilter.parse("kind=collective; location=imperial; tag=ukraine; exclude=caucasus_war")
        assert f.kinds == frozenset({EventKind.COLLECTIVE})
        assert f.tags == frozenset({"ukraine"})
        assert f.exclude_tags == frozenset({"caucasus_war"})

    @pytest.mark.parametrize("text", ["kind", "colour=red", "tag=siberia", "kind=riot"])
    def test_parse_rejects_bad_clauses(self, text):
        with pytest.raises(DataError):
            EventFilter.parse(text)

    def test_matches(self, catalog):
        imperial = EventFilter.parse("location=imperial")
        assert [r.id for r in catalog.select(imperial)] == ["e1", "e4"]
        no_caucasus = EventFilter.parse("location=imperial; exclude=caucasus_rebellion")
        assert [r.id for r in catalog.select(no_caucasus)] == ["e1"]
        assert len(catalog.select(ANY_EVENT)) == 4

    def test_str_round_trips_through_parse(self):
        f = EventFilter.parse("kind=external,collective; tag=ukraine")
        assert EventFilter.parse(str(f)) == f


class TestEventCatalog:
    def test_duplicate_ids_rejected(self, start):
        r = EventRecord("x", "collective", "imperial", start)
        with pytest.raises(DataError, match="duplicate"):
            EventCatalog((r, r))

    def test_event_months_and_counts(self, catalog, start):
        collective = EventFilter.parse("kind=collective")
        assert catalog.event_months(collective) == [start.shift(100), start.shift(200)]
        assert catalog.event_month_count(collective) == 3
        assert catalog.event_month_count() == 7

    def test_union(self, catalog, start):
        extra = EventCatalog((EventRecord("e9", "collective", "homeland", start, 1, frozenset({"muscovy"})),))
        merged = catalog.union(extra).union(catalog)
        assert len(merged) == 5

    def test_union_with_itself_is_unchanged(self, catalog):
        assert catalog.union(catalog) == catalog
        assert catalog.union(catalog).union(catalog).records == catalog.records

    def test_union_clash(self, catalog, start):
        clash = EventCatalog((EventRecord("e1", "collective", "homeland", start),))
        with pytest.raises(DataError, match="different contents"):
            catalog.union(clash)

    def test_validate_within(self, catalog, start):
        catalog.validate_within(start, start.shift(239))
        with pytest.raises(DataError, match="e4"):
            catalog.validate_within(start, start.shift(150))


class TestDesignMatrix:
    def test_from_series_trims_to_overlap(self, start):
        a = series_from_values("a", start, [1, 2, 3, 4])
        b = series_from_values("b", start.shift(1), [5, 6, 7, 8])
        design = DesignMatrix.from_series([(a, Role.DEPENDENT), (b, Role.CONTROL)])
        assert design.start == start.shift(1)
        assert design.length == 3
        assert design.array(["a", "b"]).tolist() == [[2, 5], [3, 6], [4, 7]]
        assert design.names(Role.CONTROL) == ["b"]

    def test_incomplete_rows(self, start):
        a = series_from_values("a", start, [1, None, 3])
        b = series_from_values("b", start, [1, 2, None])
        design = DesignMatrix.from_series([(a, Role.DEPENDENT), (b, Role.CONTROL)])
        assert design.incomplete_rows().tolist() == [False, True, True]
        assert design.incomplete_rows(["a"]).tolist() == [False, True, False]

    def test_name_twice_rejected(self, start):
        a = series_from_values("a", start, [1, 2])
        with pytest.raises(DataError, match="twice"):
            DesignMatrix.from_series([(a, Role.DEPENDENT), (a, Role.CONTROL)])

    def test_require_names_missing_column(self, start):
        design = DesignMatrix.from_series([(series_from_values("a", start, [1, 2]), Role.DEPENDENT)])
        with pytest.raises(DataError, match="gold"):
            design.array(["gold"])


class TestEventStudySpec:
    def test_defaults(self):
        spec = EventStudySpec()
        assert (spec.pre, spec.post, spec.estimation_window_length) == (-1, 1, 60)
        assert spec.window_length == 3

    def test_window_must_contain_event(self):
        with pytest.raises(DataError):
            EventStudySpec(pre=1, post=2)

    def test_unknown_test_name(self):
        with pytest.raises(ValueError):
            EventStudySpec(tests=frozenset({"wilcoxon"}))


@pytest.mark.parametrize("p, stars", [(0.001, "***"), (0.03, "**"), (0.07, "*"), (0.2, ""), (None, "")])
def test_significance_stars(p, stars):
    assert significance_stars(p) == stars
