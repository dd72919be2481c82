"""CSV loaders and writers for the input file set, plus sample filters.

Every loader enforces an exact header, keeps its accounting identity
(rows_read == accepted + rejected), preserves input order, and never
raises for a bad data row: the row is rejected and tallied under the
exception class name. Leading '#' comment lines are skipped so that
files carrying a provenance line still conform.
"""

from __future__ import annotations

import csv
import datetime as dt
import io
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Iterator, Sequence, TypeVar

from .datamodel import (
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
)
from .errors import (
    DuplicateKey,
    MalformedHeader,
    MalformedRow,
    NegativeCount,
    RangeViolation,
    UnknownBucket,
)

SVI_HEADER = ["ticker", "week_start", "svi"]
MARKET_HEADER = [
    "ticker", "week_start", "ret", "turnover", "market_cap",
    "news_count", "benchmark_ret",
]
DASH5_HEADER = ["ticker", "month", "bucket", "orders", "shares", "total_shares"]
IPO_HEADER = [
    "name", "ticker", "filing_date", "listing_date", "offer_price",
    "range_low", "range_high", "offering_size", "asset_size",
    "industry_return", "security_type", "first_trade_day_offset",
]


@dataclass
class IngestReport:
    """Per-file accounting: every data row is either accepted or rejected."""

    rows_read: int = 0
    rows_accepted: int = 0
    rows_rejected: int = 0
    rejection_reasons: dict[str, int] = field(default_factory=dict)

    def accept(self) -> None:
        self.rows_read += 1
        self.rows_accepted += 1

    def reject(self, reason: str) -> None:
        self.rows_read += 1
        self.rows_rejected += 1
        self.rejection_reasons[reason] = self.rejection_reasons.get(reason, 0) + 1

    def balanced(self) -> bool:
        return self.rows_read == self.rows_accepted + self.rows_rejected


@dataclass(frozen=True)
class NoiseTickerList:
    """Symbols whose search keyword collides with unrelated meanings."""

    symbols: frozenset[str]

    def __contains__(self, ticker: str) -> bool:
        return ticker in self.symbols

    def __len__(self) -> int:
        return len(self.symbols)


def _rows(source: str | Path | IO, header: list[str]) -> Iterator[list[str]]:
    """Yield data rows after validating the exact header."""
    if isinstance(source, (str, Path)):
        fh: IO = open(source, "r", encoding="utf-8", newline="")
        owns = True
    else:
        raw = source.read()
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8")
        fh = io.StringIO(raw)
        owns = False
    try:
        reader = csv.reader(fh)
        first = None
        for row in reader:
            if row and row[0].startswith("#"):
                continue
            first = row
            break
        if first is None or [c.strip() for c in first] != header:
            raise MalformedHeader(f"expected header {','.join(header)}")
        for row in reader:
            if row and row[0].startswith("#"):
                continue
            if not row:
                continue
            yield row
    finally:
        if owns:
            fh.close()


def _parse_int(text: str) -> int:
    text = text.strip()
    # int() tolerates nothing else; reject floats, signs are fine
    return int(text)


def _parse_float(text: str) -> float:
    value = float(text.strip())
    if value != value:  # NaN never belongs in an input file
        raise ValueError("NaN field")
    return value


def _parse_week(text: str) -> WeekStamp:
    day = dt.date.fromisoformat(text.strip())
    if day.weekday() != 0:
        raise MalformedRow(f"week_start {text.strip()} is not a Monday")
    return WeekStamp(day)


def load_svi(
    source: str | Path | IO, kind: KeywordKind
) -> tuple[list[SviObservation], IngestReport]:
    """Read one SVI file, tagging every row with ``kind``.

    Zero-SVI rows are retained (their removal is a study-stage rule);
    duplicate (ticker, week) pairs and out-of-range values are rejected.
    """
    out: list[SviObservation] = []
    report = IngestReport()
    seen: set[tuple[str, WeekStamp]] = set()
    for row in _rows(source, SVI_HEADER):
        try:
            if len(row) != len(SVI_HEADER):
                raise MalformedRow(f"expected {len(SVI_HEADER)} fields")
            obs = SviObservation(
                ticker=row[0],
                kind=kind,
                week=_parse_week(row[1]),
                svi=_parse_int(row[2]),
            )
            key = (obs.ticker, obs.week)
            if key in seen:
                raise DuplicateKey(f"duplicate ({obs.ticker}, {obs.week})")
            seen.add(key)
        except (MalformedRow, RangeViolation, DuplicateKey) as exc:
            report.reject(type(exc).__name__)
        except ValueError:
            report.reject(MalformedRow.__name__)
        else:
            out.append(obs)
            report.accept()
    return out, report


def load_market(source: str | Path | IO) -> tuple[list[WeeklyMarketRow], IngestReport]:
    """Read the weekly market panel (returns, turnover, size, news)."""
    out: list[WeeklyMarketRow] = []
    report = IngestReport()
    for row in _rows(source, MARKET_HEADER):
        try:
            if len(row) != len(MARKET_HEADER):
                raise MalformedRow(f"expected {len(MARKET_HEADER)} fields")
            rec = WeeklyMarketRow(
                ticker=row[0],
                week=_parse_week(row[1]),
                ret=_parse_float(row[2]),
                turnover=_parse_float(row[3]),
                market_cap=_parse_float(row[4]),
                news_count=_parse_int(row[5]),
                benchmark_ret=_parse_float(row[6]),
            )
        except (MalformedRow, RangeViolation) as exc:
            report.reject(type(exc).__name__)
        except ValueError:
            report.reject(MalformedRow.__name__)
        else:
            out.append(rec)
            report.accept()
    return out, report


def load_dash5(
    source: str | Path | IO,
) -> tuple[list[Dash5Record], dict[tuple[str, Month], int], IngestReport]:
    """Read monthly Dash-5 bucket rows plus the per (ticker, month) total volume.

    The total share volume is an explicit input column, repeated on each
    bucket row; rows disagreeing with an earlier total are rejected.
    """
    out: list[Dash5Record] = []
    totals: dict[tuple[str, Month], int] = {}
    report = IngestReport()
    for row in _rows(source, DASH5_HEADER):
        try:
            if len(row) != len(DASH5_HEADER):
                raise MalformedRow(f"expected {len(DASH5_HEADER)} fields")
            bucket_label = row[2].strip()
            if bucket_label not in Bucket.__members__:
                raise UnknownBucket(f"unknown bucket {bucket_label!r}")
            orders = _parse_int(row[3])
            shares = _parse_int(row[4])
            total_shares = _parse_int(row[5])
            if orders < 0 or shares < 0 or total_shares < 0:
                raise NegativeCount("counts must be >= 0")
            rec = Dash5Record(
                ticker=row[0],
                month=Month.parse(row[1]),
                bucket=Bucket[bucket_label],
                orders=orders,
                shares=shares,
            )
            key = (rec.ticker, rec.month)
            if key in totals and totals[key] != total_shares:
                raise MalformedRow(f"conflicting total_shares for {key}")
        except (MalformedRow, NegativeCount, UnknownBucket, RangeViolation) as exc:
            report.reject(type(exc).__name__)
        except ValueError:
            report.reject(MalformedRow.__name__)
        else:
            totals[key] = total_shares
            out.append(rec)
            report.accept()
    return out, totals, report


def load_ipo(source: str | Path | IO) -> tuple[list[IpoRecord], IngestReport]:
    """Read the offering file; an empty ticker field means 'not linkable'."""
    out: list[IpoRecord] = []
    report = IngestReport()
    for row in _rows(source, IPO_HEADER):
        try:
            if len(row) != len(IPO_HEADER):
                raise MalformedRow(f"expected {len(IPO_HEADER)} fields")
            sec_label = row[10].strip()
            if sec_label not in SecurityType.__members__:
                raise MalformedRow(f"unknown security_type {sec_label!r}")
            rec = IpoRecord(
                name=row[0].strip(),
                ticker=row[1].strip() or None,
                filing_date=dt.date.fromisoformat(row[2].strip()),
                listing_date=dt.date.fromisoformat(row[3].strip()),
                offer_price=_parse_float(row[4]),
                range_low=_parse_float(row[5]),
                range_high=_parse_float(row[6]),
                offering_size=_parse_float(row[7]),
                asset_size=_parse_float(row[8]),
                industry_return=_parse_float(row[9]),
                security_type=SecurityType[sec_label],
                first_trade_day_offset=_parse_int(row[11]),
            )
        except (MalformedRow, RangeViolation) as exc:
            report.reject(type(exc).__name__)
        except ValueError:
            report.reject(MalformedRow.__name__)
        else:
            out.append(rec)
            report.accept()
    return out, report


def load_noise_tickers(source: str | Path | IO) -> NoiseTickerList:
    """One symbol per line; blank lines and '#' comments are ignored."""
    if isinstance(source, (str, Path)):
        text = Path(source).read_text(encoding="utf-8")
    else:
        raw = source.read()
        text = raw.decode("utf-8") if isinstance(raw, bytes) else raw
    symbols = set()
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        symbols.add(canonical_ticker(line))
    return NoiseTickerList(frozenset(symbols))


# --- sample filters ---------------------------------------------------------

EXCLUDE_SECURITY_TYPE = "security-type"
EXCLUDE_PRICE_FLOOR = "price-floor"
EXCLUDE_EXCHANGE_WINDOW = "exchange-window"


def apply_ipo_exclusions(
    records: Iterable[IpoRecord],
    *,
    price_floor: float = 5.0,
    max_first_trade_offset: int = 5,
) -> tuple[list[IpoRecord], list[tuple[IpoRecord, str]]]:
    """Partition offerings into (kept, excluded-with-reason).

    Reason precedence is fixed: security type, then offer price, then the
    exchange-trading window; each record carries its first matching reason.
    """
    kept: list[IpoRecord] = []
    excluded: list[tuple[IpoRecord, str]] = []
    for rec in records:
        if rec.security_type is not SecurityType.COMMON:
            excluded.append((rec, EXCLUDE_SECURITY_TYPE))
        elif rec.offer_price < price_floor:
            excluded.append((rec, EXCLUDE_PRICE_FLOOR))
        elif rec.first_trade_day_offset > max_first_trade_offset:
            excluded.append((rec, EXCLUDE_EXCHANGE_WINDOW))
        else:
            kept.append(rec)
    return kept, excluded


RowT = TypeVar("RowT")


def filter_noise_tickers(
    rows: Sequence[RowT], noise: NoiseTickerList
) -> tuple[list[RowT], float]:
    """Drop rows whose ticker is on the noise list.

    The reported fraction is removed distinct tickers over total distinct
    tickers in ``rows``; rows without a ticker are never removed.
    """
    tickers = {r.ticker for r in rows if getattr(r, "ticker", None) is not None}
    removed = {t for t in tickers if t in noise}
    kept = [
        r
        for r in rows
        if getattr(r, "ticker", None) is None or r.ticker not in noise
    ]
    fraction = len(removed) / len(tickers) if tickers else 0.0
    return kept, fraction


# --- writers ----------------------------------------------------------------
# The synthetic generator and the CLI both emit these; repr keeps floats
# bit-exact through a load round-trip.


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write(
    path_or_file: str | Path | IO,
    header: list[str],
    rows: Iterable[Sequence],
    comment: str | None = None,
) -> None:
    if isinstance(path_or_file, (str, Path)):
        fh: IO = open(path_or_file, "w", encoding="utf-8", newline="")
        owns = True
    else:
        fh = path_or_file
        owns = False
    try:
        if comment:
            fh.write(f"# {comment}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
    finally:
        if owns:
            fh.close()


def write_svi_csv(
    rows: Iterable[SviObservation],
    path_or_file: str | Path | IO,
    comment: str | None = None,
) -> None:
    _write(
        path_or_file,
        SVI_HEADER,
        ((r.ticker, r.week, r.svi) for r in rows),
        comment,
    )


def write_market_csv(
    rows: Iterable[WeeklyMarketRow],
    path_or_file: str | Path | IO,
    comment: str | None = None,
) -> None:
    _write(
        path_or_file,
        MARKET_HEADER,
        (
            (r.ticker, r.week, r.ret, r.turnover, r.market_cap,
             r.news_count, r.benchmark_ret)
            for r in rows
        ),
        comment,
    )


def write_dash5_csv(
    records: Iterable[Dash5Record],
    totals: dict[tuple[str, Month], int],
    path_or_file: str | Path | IO,
    comment: str | None = None,
) -> None:
    _write(
        path_or_file,
        DASH5_HEADER,
        (
            (r.ticker, r.month, r.bucket.name, r.orders, r.shares,
             totals[(r.ticker, r.month)])
            for r in records
        ),
        comment,
    )


def write_ipo_csv(
    records: Iterable[IpoRecord],
    path_or_file: str | Path | IO,
    comment: str | None = None,
) -> None:
    _write(
        path_or_file,
        IPO_HEADER,
        (
            (r.name, r.ticker or "", r.filing_date.isoformat(),
             r.listing_date.isoformat(), r.offer_price, r.range_low,
             r.range_high, r.offering_size, r.asset_size, r.industry_return,
             r.security_type.name, r.first_trade_day_offset)
            for r in records
        ),
        comment,
    )


def write_noise_tickers(
    noise: NoiseTickerList, path_or_file: str | Path | IO, comment: str | None = None
) -> None:
    lines = []
    if comment:
        lines.append(f"# {comment}")
    lines.extend(sorted(noise.symbols))
    text = "\n".join(lines) + "\n"
    if isinstance(path_or_file, (str, Path)):
        Path(path_or_file).write_text(text, encoding="utf-8")
    else:
        path_or_file.write(text)
