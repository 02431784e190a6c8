"""Loading, aggregation and basic transforms of daily discharge series.

Raw inputs are per-river water discharge records (m3/s). They are summed
date by date into one system-level series, log-transformed, and sliced
into fundamental periods before estimation. The time step is expressed
in years; daily data use 1/365 regardless of leap days.
"""

from __future__ import annotations

import csv
import datetime
import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError, GapError, ParseError, SeriesRangeError, SizeError

DAYS_PER_YEAR = 365.0
DEFAULT_DT_YEARS = 1.0 / DAYS_PER_YEAR

#: Default column mapping for ingestion. Only date, river and discharge are
#: required; region and reservoir are carried as optional metadata.
DEFAULT_SCHEMA = {
    "date": "date",
    "region": "region",
    "reservoir": "reservoir",
    "river": "river",
    "discharge": "discharge",
}


class Region(enum.Enum):
    """Hydrological regions of the interconnected system."""

    ANTIOQUIA = "Antioquia"
    CARIBBEAN = "Caribbean"
    CENTER = "Center"
    EAST = "East"
    VALLE = "Valle"


@dataclass(frozen=True)
class RiverRecord:
    """One daily discharge observation for one river."""

    river: str
    date: datetime.date
    discharge: float
    region: Region | None = None
    reservoir: str | None = None

    def __post_init__(self):
        if not math.isfinite(self.discharge) or self.discharge < 0:
            raise DomainError(
                f"discharge must be finite and >= 0, got {self.discharge!r} "
                f"for river {self.river!r} on {self.date}"
            )


@dataclass(frozen=True)
class TimeSeries:
    """Uniformly sampled values with a calendar anchor.

    ``dt_years`` is the sampling step expressed in years (1/365 for daily
    data). Values must be complete: gaps are resolved at ingestion, never
    carried as NaN.
    """

    start_date: datetime.date
    values: np.ndarray
    dt_years: float = DEFAULT_DT_YEARS
    label: str = ""

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        if vals.ndim != 1 or vals.size == 0:
            raise SizeError("series values must be a non-empty 1-d array")
        if not np.all(np.isfinite(vals)):
            raise DomainError("series values must be finite (no gaps/NaN)")
        if not self.dt_years > 0:
            raise DomainError(f"dt_years must be positive, got {self.dt_years}")

    def __len__(self) -> int:
        return self.values.size

    @property
    def end_date(self) -> datetime.date:
        return self.start_date + datetime.timedelta(days=len(self) - 1)

    def dates(self) -> list[datetime.date]:
        one_day = datetime.timedelta(days=1)
        return [self.start_date + i * one_day for i in range(len(self))]


@dataclass(frozen=True)
class DescriptiveStats:
    mean: float
    std_dev: float
    n: int


def ingest_csv(path, schema: dict | None = None) -> list[RiverRecord]:
    """Parse per-river discharge records from a CSV file.

    ``schema`` maps the logical fields (date, river, discharge, optionally
    region and reservoir) to column names in the file header. Records are
    returned sorted by river then date; duplicate dates for one river and
    negative discharge values are rejected.
    """
    schema = {**DEFAULT_SCHEMA, **(schema or {})}
    records: list[RiverRecord] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            return []
        for required in ("date", "river", "discharge"):
            if schema[required] not in reader.fieldnames:
                raise ParseError(
                    f"missing required column {schema[required]!r} in {path}"
                )
        has_region = schema["region"] in reader.fieldnames
        has_reservoir = schema["reservoir"] in reader.fieldnames
        for row_no, row in enumerate(reader, start=2):
            try:
                date = datetime.date.fromisoformat(row[schema["date"]].strip())
                discharge = float(row[schema["discharge"]])
            except (ValueError, AttributeError, KeyError) as exc:
                raise ParseError(f"{path}:{row_no}: malformed row: {exc}") from exc
            river = (row[schema["river"]] or "").strip()
            if not river:
                raise ParseError(f"{path}:{row_no}: empty river name")
            region = None
            if has_region and row[schema["region"]].strip():
                try:
                    region = Region(row[schema["region"]].strip())
                except ValueError as exc:
                    raise ParseError(
                        f"{path}:{row_no}: unknown region {row[schema['region']]!r}"
                    ) from exc
            reservoir = row[schema["reservoir"]].strip() if has_reservoir else None
            try:
                records.append(
                    RiverRecord(
                        river=river,
                        date=date,
                        discharge=discharge,
                        region=region,
                        reservoir=reservoir,
                    )
                )
            except DomainError as exc:
                raise DomainError(f"{path}:{row_no}: {exc}") from exc
    records.sort(key=lambda r: (r.river, r.date))
    seen: set[tuple[str, datetime.date]] = set()
    for rec in records:
        key = (rec.river, rec.date)
        if key in seen:
            raise DomainError(f"duplicate date {rec.date} for river {rec.river!r}")
        seen.add(key)
    return records


def aggregate_system(
    records, max_gap_days: int = 0, label: str = "system discharge"
) -> TimeSeries:
    """Sum all rivers' discharge per calendar date into one series.

    Every date between the first and last observed date must be covered by
    at least one river. By default a missing date raises :class:`GapError`;
    setting ``max_gap_days`` (at most 3) fills runs of up to that many
    consecutive missing dates by linear interpolation of the total.
    """
    # canonical order makes the float sums permutation-invariant
    records = sorted(records, key=lambda r: (r.date, r.river, r.discharge))
    if not records:
        raise SizeError("no records to aggregate")
    if max_gap_days > 3:
        raise DomainError("gap interpolation is limited to runs of <= 3 days")
    totals: dict[datetime.date, float] = {}
    for rec in records:
        totals[rec.date] = totals.get(rec.date, 0.0) + rec.discharge
    start = min(totals)
    end = max(totals)
    n_days = (end - start).days + 1
    values = np.full(n_days, np.nan)
    for date, total in totals.items():
        values[(date - start).days] = total
    missing = np.flatnonzero(np.isnan(values))
    if missing.size:
        if max_gap_days <= 0:
            first = start + datetime.timedelta(days=int(missing[0]))
            raise GapError(f"no discharge records for {first.isoformat()}")
        # check every run of consecutive missing days before filling any
        runs = np.split(missing, np.flatnonzero(np.diff(missing) > 1) + 1)
        for run in runs:
            if run.size > max_gap_days:
                first = start + datetime.timedelta(days=int(run[0]))
                raise GapError(
                    f"gap of {run.size} days starting {first.isoformat()} "
                    f"exceeds max_gap_days={max_gap_days}"
                )
        covered = np.flatnonzero(~np.isnan(values))
        values[missing] = np.interp(missing, covered, values[covered])
    return TimeSeries(start_date=start, values=values, label=label)


def log_transform(series: TimeSeries) -> TimeSeries:
    """Elementwise natural log; all values must be strictly positive."""
    bad = np.flatnonzero(series.values <= 0)
    if bad.size:
        i = int(bad[0])
        raise DomainError(f"cannot log-transform non-positive value at index {i}")
    return replace(series, values=np.log(series.values),
                   label=f"log({series.label})" if series.label else "log")


def slice_period(
    series: TimeSeries, start: datetime.date, end: datetime.date
) -> TimeSeries:
    """Contiguous sub-series from ``start`` to ``end`` (both inclusive)."""
    if start >= end:
        raise SeriesRangeError(f"start {start} must precede end {end}")
    if start < series.start_date or end > series.end_date:
        raise SeriesRangeError(
            f"slice {start}..{end} outside series span "
            f"{series.start_date}..{series.end_date}"
        )
    i0 = (start - series.start_date).days
    i1 = (end - series.start_date).days + 1
    return replace(series, start_date=start, values=series.values[i0:i1].copy())


def difference(series: TimeSeries) -> TimeSeries:
    """First difference; one element shorter than the input."""
    if len(series) < 2:
        raise SizeError("need at least 2 points to difference")
    return replace(
        series,
        start_date=series.start_date + datetime.timedelta(days=1),
        values=np.diff(series.values),
        label=f"diff({series.label})" if series.label else "diff",
    )


def describe(series: TimeSeries) -> DescriptiveStats:
    """Sample mean and sample standard deviation (n-1 denominator)."""
    if len(series) < 2:
        raise SizeError("need at least 2 points for descriptive statistics")
    vals = series.values
    return DescriptiveStats(
        mean=float(np.mean(vals)),
        std_dev=float(np.std(vals, ddof=1)),
        n=len(series),
    )


def write_series_csv(series: TimeSeries, path) -> None:
    """Write a series as ``date,value`` rows."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["date", "value"])
        for date, value in zip(series.dates(), series.values):
            writer.writerow([date.isoformat(), repr(float(value))])


def read_series_csv(path, label: str = "") -> TimeSeries:
    """Read a ``date,value`` CSV produced by :func:`write_series_csv`."""
    dates: list[datetime.date] = []
    values: list[float] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"date", "value"} <= set(reader.fieldnames):
            raise ParseError(f"{path}: expected columns date,value")
        for row_no, row in enumerate(reader, start=2):
            try:
                dates.append(datetime.date.fromisoformat(row["date"].strip()))
                values.append(float(row["value"]))
            except (ValueError, AttributeError) as exc:
                raise ParseError(f"{path}:{row_no}: malformed row: {exc}") from exc
    if not dates:
        raise SizeError(f"{path}: empty series file")
    for i in range(1, len(dates)):
        if (dates[i] - dates[i - 1]).days != 1:
            raise GapError(f"{path}: dates not consecutive at {dates[i]}")
    return TimeSeries(start_date=dates[0], values=np.array(values), label=label)
