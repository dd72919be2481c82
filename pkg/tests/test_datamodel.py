"""Calendar arithmetic and record validation."""

import datetime as dt

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from svipanel.datamodel import (
    Bucket,
    Dash5Record,
    IpoRecord,
    KeywordKind,
    Month,
    SecurityType,
    SviObservation,
    WeeklyMarketRow,
    WeekStamp,
    canonical_ticker,
    week_of,
)
from svipanel.errors import InvalidConfig, RangeViolation


class TestWeekStamp:
    def test_epoch_is_week_zero(self):
        assert WeekStamp(dt.date(2000, 1, 3)).index == 0

    def test_rejects_non_monday(self):
        with pytest.raises(ValueError):
            WeekStamp(dt.date(2019, 7, 9))

    def test_parse_and_str_round_trip(self):
        w = WeekStamp.parse("2019-07-08")
        assert str(w) == "2019-07-08"
        assert w.week_start.weekday() == 0

    def test_add_and_index_consistent(self):
        w = WeekStamp.parse("2019-07-08")
        assert w.add(5).index == w.index + 5
        assert WeekStamp.from_index(w.index) == w

    def test_ordering(self):
        a = WeekStamp.parse("2019-07-01")
        b = WeekStamp.parse("2019-07-08")
        assert a < b


class TestWeekOf:
    def test_monday_maps_to_itself(self):
        assert week_of(dt.date(2019, 7, 8)).week_start == dt.date(2019, 7, 8)

    def test_sunday_maps_back_six_days(self):
        assert week_of(dt.date(2019, 7, 14)).week_start == dt.date(2019, 7, 8)

    @given(st.dates(min_value=dt.date(1990, 1, 1), max_value=dt.date(2050, 12, 31)))
    @settings(max_examples=200, deadline=None)
    def test_idempotent_and_within_week(self, day):
        w = week_of(day)
        assert week_of(w.week_start) == w
        assert 0 <= (day - w.week_start).days <= 6


class TestMonth:
    def test_index_round_trip(self):
        m = Month(2019, 7)
        assert Month.from_index(m.index) == m

    def test_parse(self):
        assert Month.parse("2019-07") == Month(2019, 7)

    def test_add_crosses_year(self):
        assert Month(2019, 12).add(1) == Month(2020, 1)

    def test_week_month_assignment(self):
        # the Dec-2019/Jan-2020 boundary: week starting Mon Dec 30 is
        # December's by the week_start rule
        w = WeekStamp.parse("2019-12-30")
        assert w.month() == Month(2019, 12)


class TestCanonicalTicker:
    def test_uppercases_and_strips(self):
        assert canonical_ticker(" aapl ") == "AAPL"

    def test_rejects_garbage(self):
        with pytest.raises(ValueError):
            canonical_ticker("TOOLONGNAME")
        with pytest.raises(ValueError):
            canonical_ticker("")


class TestRecords:
    WEEK = WeekStamp.parse("2019-07-08")

    def test_svi_range_enforced(self):
        SviObservation("AAPL", KeywordKind.TICKER, self.WEEK, 0)
        SviObservation("AAPL", KeywordKind.TICKER, self.WEEK, 100)
        with pytest.raises(RangeViolation):
            SviObservation("AAPL", KeywordKind.TICKER, self.WEEK, 150)
        with pytest.raises(RangeViolation):
            SviObservation("AAPL", KeywordKind.TICKER, self.WEEK, -1)

    def test_market_row_bounds(self):
        row = WeeklyMarketRow("AAPL", self.WEEK, 0.02, 0.01, 1e9, 3, 0.01)
        assert row.ticker == "AAPL"
        with pytest.raises(RangeViolation):
            WeeklyMarketRow("AAPL", self.WEEK, -1.5, 0.01, 1e9, 3, 0.0)
        with pytest.raises(RangeViolation):
            WeeklyMarketRow("AAPL", self.WEEK, 0.02, -0.01, 1e9, 3, 0.0)
        with pytest.raises(RangeViolation):
            WeeklyMarketRow("AAPL", self.WEEK, 0.02, 0.01, 0.0, 3, 0.0)

    def test_dash5_negative_counts(self):
        Dash5Record("AAPL", Month(2005, 3), Bucket.B2, 120, 60000)
        with pytest.raises(RangeViolation):
            Dash5Record("AAPL", Month(2005, 3), Bucket.B2, -1, 0)

    def test_bucket_share_bounds(self):
        assert Bucket.B1.lo == 100 and Bucket.B1.hi == 499
        assert Bucket.B2.lo == 500 and Bucket.B2.hi == 1999
        assert Bucket.B3.lo == 2000 and Bucket.B3.hi == 4999
        assert Bucket.B4.lo == 5000 and Bucket.B4.hi == 9999

    def test_ipo_record_date_order(self):
        rec = IpoRecord(
            name="Example Corp",
            ticker="EXMP",
            filing_date=dt.date(2019, 4, 1),
            listing_date=dt.date(2019, 6, 12),
            range_low=10.0,
            range_high=12.0,
            offer_price=12.0,
            offering_size=1e8,
            asset_size=5e8,
            industry_return=0.02,
            security_type=SecurityType.COMMON,
            first_trade_day_offset=1,
        )
        assert rec.ticker == "EXMP"
        with pytest.raises(RangeViolation):
            IpoRecord(
                name="Example Corp",
                ticker="EXMP",
                filing_date=dt.date(2019, 7, 1),
                listing_date=dt.date(2019, 6, 12),
                range_low=10.0,
                range_high=12.0,
                offer_price=12.0,
                offering_size=1e8,
                asset_size=5e8,
                industry_return=0.02,
                security_type=SecurityType.COMMON,
                first_trade_day_offset=1,
            )

    def test_ipo_range_order(self):
        with pytest.raises(RangeViolation):
            IpoRecord(
                name="Example Corp",
                ticker="EXMP",
                filing_date=dt.date(2019, 4, 1),
                listing_date=dt.date(2019, 6, 12),
                range_low=12.0,
                range_high=10.0,
                offer_price=12.0,
                offering_size=1e8,
                asset_size=5e8,
                industry_return=0.02,
                security_type=SecurityType.COMMON,
                first_trade_day_offset=1,
            )
