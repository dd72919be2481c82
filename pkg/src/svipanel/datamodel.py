"""Core value types: weekly calendar, validated input records, estimator outputs.

All weekly quantities are keyed to the Monday that starts the ISO week.
Record constructors enforce their own invariants and raise
:class:`~svipanel.errors.RangeViolation` / ``ValueError`` so the ingest
layer can classify rejections without re-implementing the rules.
"""

from __future__ import annotations

import datetime as dt
import enum
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import RangeViolation

# Monday anchoring every integer week index used internally.
WEEK_EPOCH = dt.date(2000, 1, 3)

_TICKER_RE = re.compile(r"^[A-Z.\-]{1,6}$")


def canonical_ticker(symbol: str) -> str:
    """Uppercase and validate a ticker symbol (1-6 chars from A-Z, '.', '-')."""
    sym = symbol.strip().upper()
    if not _TICKER_RE.match(sym):
        raise ValueError(f"invalid ticker symbol: {symbol!r}")
    return sym


@dataclass(frozen=True, order=True)
class WeekStamp:
    """A calendar week, identified by its Monday."""

    week_start: dt.date

    def __post_init__(self) -> None:
        if self.week_start.weekday() != 0:
            raise ValueError(f"week_start {self.week_start} is not a Monday")

    @property
    def index(self) -> int:
        """Whole weeks since the fixed Monday epoch; totally ordered."""
        return (self.week_start - WEEK_EPOCH).days // 7

    @classmethod
    def from_index(cls, index: int) -> "WeekStamp":
        return cls(WEEK_EPOCH + dt.timedelta(weeks=index))

    @classmethod
    def parse(cls, text: str) -> "WeekStamp":
        return cls(dt.date.fromisoformat(text.strip()))

    def add(self, weeks: int) -> "WeekStamp":
        return WeekStamp(self.week_start + dt.timedelta(weeks=weeks))

    def month(self) -> "Month":
        return Month(self.week_start.year, self.week_start.month)

    def __str__(self) -> str:
        return self.week_start.isoformat()


def week_of(day: dt.date) -> WeekStamp:
    """Map any calendar date to the Monday of its ISO week. Idempotent."""
    return WeekStamp(day - dt.timedelta(days=day.weekday()))


@dataclass(frozen=True, order=True)
class Month:
    """A calendar month; ordering and arithmetic via a flat month index."""

    year: int
    month: int

    def __post_init__(self) -> None:
        if not 1 <= self.month <= 12:
            raise ValueError(f"month out of range: {self.month}")

    @property
    def index(self) -> int:
        return (self.year - 2000) * 12 + self.month - 1

    @classmethod
    def from_index(cls, index: int) -> "Month":
        y, m = divmod(index, 12)
        return cls(2000 + y, m + 1)

    @classmethod
    def parse(cls, text: str) -> "Month":
        y, _, m = text.strip().partition("-")
        if not m:
            raise ValueError(f"expected YYYY-MM, got {text!r}")
        return cls(int(y), int(m))

    def add(self, months: int) -> "Month":
        return Month.from_index(self.index + months)

    def first_day(self) -> dt.date:
        return dt.date(self.year, self.month, 1)

    def __str__(self) -> str:
        return f"{self.year:04d}-{self.month:02d}"


class KeywordKind(enum.Enum):
    """What the search keyword behind an SVI series refers to."""

    TICKER = "TICKER"
    NAME = "NAME"
    PRODUCT = "PRODUCT"


class Bucket(enum.Enum):
    """Dash-5 order-size buckets (share counts per order)."""

    B1 = (100, 499)
    B2 = (500, 1999)
    B3 = (2000, 4999)
    B4 = (5000, 9999)

    def __init__(self, lo: int, hi: int):
        self.lo = lo
        self.hi = hi


class SecurityType(enum.Enum):
    COMMON = "COMMON"
    CLOSED_FUND = "CLOSED_FUND"
    REIT = "REIT"
    ADR = "ADR"
    LP = "LP"


@dataclass(frozen=True)
class SviObservation:
    """One weekly search-volume index value for one keyword."""

    ticker: str
    kind: KeywordKind
    week: WeekStamp
    svi: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "ticker", canonical_ticker(self.ticker))
        if not 0 <= self.svi <= 100:
            raise RangeViolation(f"svi {self.svi} outside [0, 100]")


@dataclass(frozen=True)
class WeeklyMarketRow:
    """One ticker-week of returns, turnover, size, and news flow."""

    ticker: str
    week: WeekStamp
    ret: float
    turnover: float
    market_cap: float
    news_count: int
    benchmark_ret: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "ticker", canonical_ticker(self.ticker))
        if not self.ret > -1.0:
            raise RangeViolation(f"ret {self.ret} must exceed -1")
        if self.turnover < 0:
            raise RangeViolation(f"turnover {self.turnover} below 0")
        if not self.market_cap > 0:
            raise RangeViolation(f"market_cap {self.market_cap} must be positive")
        if self.news_count < 0:
            raise RangeViolation(f"news_count {self.news_count} below 0")


@dataclass(frozen=True)
class Dash5Record:
    """Monthly Dash-5 order flow for one ticker and one size bucket."""

    ticker: str
    month: Month
    bucket: Bucket
    orders: int
    shares: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "ticker", canonical_ticker(self.ticker))
        if self.orders < 0 or self.shares < 0:
            raise RangeViolation(f"negative count in {self.ticker} {self.month}")


@dataclass(frozen=True)
class IpoRecord:
    """One offering: filing terms, listing outcome, issuer characteristics."""

    name: str
    ticker: str | None
    filing_date: dt.date
    listing_date: dt.date
    offer_price: float
    range_low: float
    range_high: float
    offering_size: float
    asset_size: float
    industry_return: float
    security_type: SecurityType
    first_trade_day_offset: int

    def __post_init__(self) -> None:
        if self.ticker is not None:
            object.__setattr__(self, "ticker", canonical_ticker(self.ticker))
        if self.filing_date >= self.listing_date:
            raise RangeViolation(
                f"filing {self.filing_date} not before listing {self.listing_date}"
            )
        if not (0 < self.range_low <= self.range_high):
            raise RangeViolation(
                f"range [{self.range_low}, {self.range_high}] invalid"
            )
        if not self.offer_price > 0:
            raise RangeViolation(f"offer_price {self.offer_price} must be positive")
        if self.first_trade_day_offset < 0:
            raise RangeViolation("first_trade_day_offset below 0")


@dataclass(frozen=True)
class AttentionRow:
    """Derived per ticker-week metrics consumed by the regression studies."""

    ticker: str
    week: WeekStamp
    asvi: float
    apsvi: float | None
    abn_ret: float
    abn_turnover: float
    news_dummy: int
    log_mkt_cap: float
    dash5_pct: float | None

    def __post_init__(self) -> None:
        if self.news_dummy not in (0, 1):
            raise RangeViolation(f"news_dummy {self.news_dummy} not in {{0, 1}}")
        if self.dash5_pct is not None and not 0.0 <= self.dash5_pct <= 1.0:
            raise RangeViolation(f"dash5_pct {self.dash5_pct} outside [0, 1]")


# --- estimator outputs ------------------------------------------------------


@dataclass(eq=False)
class RegressionResult:
    """A single OLS fit with classical and HC1 standard errors."""

    names: tuple[str, ...]
    coef: np.ndarray
    se: np.ndarray
    t: np.ndarray
    p: np.ndarray
    r2: float
    n: int
    method: str
    se_classical: np.ndarray
    se_hc1: np.ndarray

    def __post_init__(self) -> None:
        k = len(self.names)
        for arr in (self.coef, self.se, self.t, self.p, self.se_classical, self.se_hc1):
            if len(arr) != k:
                raise ValueError("coefficient vectors must share one length")

    def __getitem__(self, name: str) -> "CoefficientView":
        i = self.names.index(name)
        return CoefficientView(
            name=name,
            coef=float(self.coef[i]),
            se=float(self.se[i]),
            t=float(self.t[i]),
            p=float(self.p[i]),
        )


@dataclass(frozen=True)
class CoefficientView:
    """One named coefficient with its inference columns."""

    name: str
    coef: float
    se: float
    t: float
    p: float


@dataclass(eq=False)
class FmbResult:
    """Fama-MacBeth second-pass summary for one forward-return horizon."""

    horizon: object
    names: tuple[str, ...]
    weekly_coefs: np.ndarray
    weeks: tuple[int, ...]
    mean_coef: np.ndarray
    nw_se: np.ndarray
    t: np.ndarray
    p: np.ndarray
    r2: float
    n_weeks: int
    skipped_weeks: int
    nw_lags: int

    def __getitem__(self, name: str) -> CoefficientView:
        i = self.names.index(name)
        return CoefficientView(
            name=name,
            coef=float(self.mean_coef[i]),
            se=float(self.nw_se[i]),
            t=float(self.t[i]),
            p=float(self.p[i]),
        )


@dataclass(eq=False)
class Var1Fit:
    """One ticker's VAR(1): lag-coefficient matrix, intercepts, per-equation R^2.

    ``coef[i, j]`` is the loading of equation i on the lagged series j.
    """

    names: tuple[str, ...]
    coef: np.ndarray
    intercept: np.ndarray
    r2: np.ndarray
    nobs: int


@dataclass(eq=False)
class VarResult:
    """Cross-ticker aggregate of per-ticker VAR(1) fits."""

    names: tuple[str, ...]
    per_ticker: dict = field(default_factory=dict)
    avg_coef: np.ndarray = None
    avg_r2: np.ndarray = None
    boot_p: np.ndarray | None = None
    n_tickers: int = 0
