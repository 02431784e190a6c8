import datetime
import math

import numpy as np
import pytest

from hydrocast import (
    DomainError,
    GapError,
    ParseError,
    Region,
    RiverRecord,
    SeriesRangeError,
    SizeError,
    TimeSeries,
    aggregate_system,
    describe,
    difference,
    ingest_csv,
    log_transform,
    read_series_csv,
    slice_period,
    write_series_csv,
)

D = datetime.date


def _write(tmp_path, text, name="rivers.csv"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


class TestIngest:
    def test_parses_fields(self, tmp_path):
        path = _write(
            tmp_path,
            "date,river,reservoir,region,discharge\n"
            "2004-02-05,Nare,Peñol,Antioquia,312.5\n",
        )
        records = ingest_csv(path)
        assert len(records) == 1
        rec = records[0]
        assert rec.date == D(2004, 2, 5)
        assert rec.river == "Nare"
        assert rec.discharge == 312.5
        assert rec.region is Region.ANTIOQUIA
        assert rec.reservoir == "Peñol"

    def test_empty_file(self, tmp_path):
        assert ingest_csv(_write(tmp_path, "date,river,discharge\n")) == []
        assert ingest_csv(_write(tmp_path, "")) == []

    def test_negative_discharge_rejected(self, tmp_path):
        path = _write(tmp_path, "date,river,discharge\n2004-02-05,Nare,-5\n")
        with pytest.raises(DomainError, match="discharge"):
            ingest_csv(path)

    def test_malformed_row_carries_row_number(self, tmp_path):
        path = _write(
            tmp_path,
            "date,river,discharge\n2004-02-05,Nare,300\nnot-a-date,Nare,10\n",
        )
        with pytest.raises(ParseError, match=":3:"):
            ingest_csv(path)

    def test_missing_column(self, tmp_path):
        path = _write(tmp_path, "date,river\n2004-02-05,Nare\n")
        with pytest.raises(ParseError, match="discharge"):
            ingest_csv(path)

    def test_unknown_region(self, tmp_path):
        path = _write(
            tmp_path, "date,river,region,discharge\n2004-02-05,Nare,Atlantis,3\n"
        )
        with pytest.raises(ParseError, match="Atlantis"):
            ingest_csv(path)

    def test_duplicate_date_per_river(self, tmp_path):
        path = _write(
            tmp_path,
            "date,river,discharge\n2004-02-05,Nare,1\n2004-02-05,Nare,2\n",
        )
        with pytest.raises(DomainError, match="duplicate"):
            ingest_csv(path)

    def test_schema_remap(self, tmp_path):
        path = _write(tmp_path, "dia,rio,caudal\n2004-02-05,Nare,12.5\n")
        records = ingest_csv(
            path, schema={"date": "dia", "river": "rio", "discharge": "caudal"}
        )
        assert records[0].discharge == 12.5
        assert records[0].region is None


def _rec(date, river, discharge):
    return RiverRecord(river=river, date=date, discharge=discharge)


class TestAggregate:
    def test_two_rivers_sum(self):
        series = aggregate_system(
            [_rec(D(2004, 2, 5), "a", 300.0), _rec(D(2004, 2, 5), "b", 700.0)]
        )
        assert series.values.tolist() == [1000.0]
        assert series.start_date == D(2004, 2, 5)

    def test_single_river_identity(self):
        recs = [_rec(D(2004, 2, 5 + i), "a", 10.0 * (i + 1)) for i in range(4)]
        series = aggregate_system(recs)
        assert series.values.tolist() == [10.0, 20.0, 30.0, 40.0]

    def test_gap_raises_naming_date(self):
        recs = [_rec(D(2004, 2, 5), "a", 1.0), _rec(D(2004, 2, 7), "a", 1.0)]
        with pytest.raises(GapError, match="2004-02-06"):
            aggregate_system(recs)

    def test_permutation_invariance(self):
        rng = np.random.default_rng(1)
        recs = [
            _rec(D(2004, 2, 5 + i), river, float(rng.uniform(1, 10)))
            for i in range(10)
            for river in ("a", "b", "c")
        ]
        base = aggregate_system(recs)
        shuffled = list(recs)
        rng.shuffle(shuffled)
        assert np.array_equal(base.values, aggregate_system(shuffled).values)

    def test_gap_interpolation(self):
        recs = [
            _rec(D(2004, 2, 5), "a", 10.0),
            _rec(D(2004, 2, 9), "a", 18.0),
        ]
        series = aggregate_system(recs, max_gap_days=3)
        assert series.values.tolist() == [10.0, 12.0, 14.0, 16.0, 18.0]

    def test_gap_too_long_even_with_flag(self):
        recs = [_rec(D(2004, 2, 5), "a", 10.0), _rec(D(2004, 2, 10), "a", 18.0)]
        with pytest.raises(GapError, match="2004-02-06"):
            aggregate_system(recs, max_gap_days=3)

    def test_no_records(self):
        with pytest.raises(SizeError):
            aggregate_system([])


class TestLogTransform:
    def test_values(self, make_series):
        out = log_transform(make_series([1000.0, 1.0]))
        assert out.values[0] == pytest.approx(6.9078, abs=1e-4)
        assert out.values[1] == 0.0

    def test_zero_rejected_with_index(self, make_series):
        with pytest.raises(DomainError, match="index 2"):
            log_transform(make_series([1.0, 2.0, 0.0]))

    def test_exp_round_trip(self, make_series):
        rng = np.random.default_rng(3)
        values = rng.uniform(0.5, 2000.0, size=200)
        out = log_transform(make_series(values))
        assert np.max(np.abs(np.exp(out.values) / values - 1.0)) < 1e-12


class TestSlicePeriod:
    def _long_series(self):
        n = (D(2016, 2, 4) - D(2004, 2, 5)).days + 1
        return TimeSeries(start_date=D(2004, 2, 5), values=np.arange(n, dtype=float))

    def test_fundamental_period_length(self):
        series = self._long_series()
        sl = slice_period(series, D(2007, 2, 5), D(2010, 2, 4))
        # three years of daily points; 2008 contributes a leap day
        assert len(sl) == 1096
        assert sl.start_date == D(2007, 2, 5)
        assert sl.values[0] == (D(2007, 2, 5) - D(2004, 2, 5)).days

    def test_identity_slice(self):
        series = self._long_series()
        sl = slice_period(series, series.start_date, series.end_date)
        assert np.array_equal(sl.values, series.values)

    def test_end_before_start(self):
        with pytest.raises(SeriesRangeError):
            slice_period(self._long_series(), D(2010, 2, 4), D(2007, 2, 5))

    def test_out_of_span(self):
        with pytest.raises(SeriesRangeError):
            slice_period(self._long_series(), D(2003, 1, 1), D(2005, 1, 1))


class TestDifference:
    def test_values(self, make_series):
        out = difference(make_series([7.0, 7.2, 7.1]))
        assert out.values == pytest.approx([0.2, -0.1])
        assert len(out) == 2

    def test_constant(self, make_series):
        assert np.all(difference(make_series([3.0] * 5)).values == 0.0)

    def test_too_short(self, make_series):
        with pytest.raises(SizeError):
            difference(make_series([1.0]))

    def test_cumsum_round_trip(self, make_series):
        rng = np.random.default_rng(5)
        increments = rng.standard_normal(300)
        series = make_series(np.concatenate([[0.0], np.cumsum(increments)]))
        assert np.array_equal(difference(series).values, np.diff(series.values))
        # cumulative sums built by repeated addition recover increments exactly
        assert difference(series).values == pytest.approx(increments, abs=1e-12)


class TestDescribe:
    def test_basic(self, make_series):
        stats = describe(make_series([1.0, 2.0, 3.0]))
        assert stats.mean == 2.0
        assert stats.std_dev == 1.0
        assert stats.n == 3

    def test_constant(self, make_series):
        assert describe(make_series([4.0, 4.0, 4.0])).std_dev == 0.0

    def test_too_short(self, make_series):
        with pytest.raises(SizeError):
            describe(make_series([1.0]))

    def test_shift_invariance(self, make_series):
        rng = np.random.default_rng(7)
        values = rng.standard_normal(500)
        base = describe(make_series(values))
        shifted = describe(make_series(values + 123.456))
        assert shifted.mean - base.mean == pytest.approx(123.456, abs=1e-12)
        assert shifted.std_dev == pytest.approx(base.std_dev, abs=1e-12)


class TestSeriesType:
    def test_rejects_nan(self):
        with pytest.raises(DomainError):
            TimeSeries(start_date=D(2004, 2, 5), values=np.array([1.0, math.nan]))

    def test_rejects_empty(self):
        with pytest.raises(SizeError):
            TimeSeries(start_date=D(2004, 2, 5), values=np.array([]))

    def test_csv_round_trip(self, tmp_path, make_series):
        series = make_series([1.5, 2.5, 3.5])
        path = tmp_path / "series.csv"
        write_series_csv(series, path)
        back = read_series_csv(path)
        assert back.start_date == series.start_date
        assert np.array_equal(back.values, series.values)
