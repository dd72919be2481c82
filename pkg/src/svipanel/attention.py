"""Attention and control variables built from the weekly inputs.

The record-level functions state the contracts (and raise on violated
preconditions); :func:`build_attention_panel` is the vectorized panel
construction used by the studies, which turns the same failures into
missing values instead.
"""

from __future__ import annotations

import enum
import math
from typing import Iterable, Mapping, Sequence

import numpy as np
import pandas as pd

from .datamodel import (
    Dash5Record,
    Month,
    SviObservation,
    WeeklyMarketRow,
    WeekStamp,
)
from .errors import (
    DegenerateCrossSection,
    EmptyMonth,
    InsufficientHistory,
    MissingFutureWeeks,
    NonPositiveInput,
    ZeroDispersion,
    ZeroSvi,
)

MEDIAN_WINDOW = 8
TURNOVER_WINDOW = 26
TURNOVER_MIN_OBS = 10
TURNOVER_EPS = 1e-8
BPS = 1e4


class Horizon(enum.Enum):
    """Forward-return horizons: four single weeks and the 5-52 week block."""

    W1 = 1
    W2 = 2
    W3 = 3
    W4 = 4
    W5_52 = (5, 52)


def forward_column(horizon: Horizon) -> str:
    return f"fwd_bps_{horizon.name}"


def compute_asvi(series: Mapping[WeekStamp, float], week: WeekStamp) -> float:
    """Abnormal search volume: log SVI over the log of its trailing 8-week median.

    Parameters
    ----------
    series : mapping of WeekStamp to SVI value for a single keyword
    week : the week whose abnormal value is wanted

    Requires the week itself and all eight immediately preceding weeks to
    be present and positive; the median of eight is the mean of the 4th
    and 5th order statistics. The result is invariant to rescaling the
    series and is zero whenever SVI_t equals the trailing median.
    """
    current = series.get(week)
    if current is None:
        raise InsufficientHistory(f"no SVI for {week}")
    prior = []
    for back in range(1, MEDIAN_WINDOW + 1):
        value = series.get(week.add(-back))
        if value is None:
            raise InsufficientHistory(
                f"{week}: only {len(prior)} of {MEDIAN_WINDOW} prior weeks present"
            )
        prior.append(value)
    if current == 0 or any(v == 0 for v in prior):
        raise ZeroSvi(f"zero SVI in the window ending {week}")
    return math.log(current) - math.log(float(np.median(prior)))


def compute_apsvi(series: Mapping[WeekStamp, float], week: WeekStamp) -> float:
    """Product-keyword variant; numerically identical to :func:`compute_asvi`."""
    return compute_asvi(series, week)


def abnormal_return(ret, benchmark_ret):
    """Return minus its benchmark; broadcasts over arrays."""
    return ret - benchmark_ret


def abnormal_turnover(
    series: Mapping[WeekStamp, float],
    week: WeekStamp,
    *,
    window: int = TURNOVER_WINDOW,
    min_obs: int = TURNOVER_MIN_OBS,
    eps: float = TURNOVER_EPS,
) -> float:
    """Log turnover standardized against its trailing window.

    The window covers the ``window`` weeks strictly before ``week`` and
    must hold at least ``min_obs`` observations; the trailing standard
    deviation uses the n-1 divisor. ``eps`` keeps zero turnover finite.
    """
    current = series.get(week)
    if current is None:
        raise InsufficientHistory(f"no turnover for {week}")
    trailing = []
    for back in range(1, window + 1):
        value = series.get(week.add(-back))
        if value is not None:
            trailing.append(math.log(value + eps))
    if len(trailing) < min_obs:
        raise InsufficientHistory(
            f"{week}: {len(trailing)} trailing observations < {min_obs}"
        )
    if max(trailing) == min(trailing):
        raise ZeroDispersion(f"constant trailing turnover at {week}")
    mean = sum(trailing) / len(trailing)
    var = sum((v - mean) ** 2 for v in trailing) / (len(trailing) - 1)
    if var == 0.0:
        raise ZeroDispersion(f"constant trailing turnover at {week}")
    return (math.log(current + eps) - mean) / math.sqrt(var)


def news_dummy(count: int) -> int:
    """1 when any article ran that week, else 0."""
    return 1 if count > 0 else 0


def monthly_svi(values: Iterable[int]) -> int:
    """Sum of the weekly SVIs whose week_start falls in one month."""
    total = 0
    n = 0
    for v in values:
        total += v
        n += 1
    if n == 0:
        raise EmptyMonth("no weekly observations in month")
    return total


def monthly_svi_by_month(series: Mapping[WeekStamp, int]) -> dict[Month, int]:
    """Group a weekly series by the month containing each week_start."""
    out: dict[Month, int] = {}
    for week, value in series.items():
        key = week.month()
        out[key] = out.get(key, 0) + value
    return out


def log_delta(x_t: float, x_prev: float) -> float:
    """ln(x_t) - ln(x_prev); both arguments must be positive."""
    if x_t <= 0 or x_prev <= 0:
        raise NonPositiveInput(f"log delta needs positive inputs, got ({x_t}, {x_prev})")
    return math.log(x_t) - math.log(x_prev)


def arith_delta(x_t: float, x_prev: float) -> float:
    """Arithmetic growth rate (x_t - x_prev) / x_prev; x_prev must be nonzero."""
    if x_prev == 0:
        raise NonPositiveInput("arithmetic delta needs a nonzero base")
    return (x_t - x_prev) / x_prev


def cross_sectional_standardize(values: Sequence[float] | np.ndarray) -> np.ndarray:
    """Z-score a cross-section, ignoring and preserving missing entries.

    Needs at least three non-missing values and a positive sample
    standard deviation (n-1 divisor); otherwise the cross-section is
    degenerate.
    """
    arr = np.asarray(values, dtype=float)
    mask = np.isfinite(arr)
    n = int(mask.sum())
    if n < 3:
        raise DegenerateCrossSection(f"{n} non-missing values < 3")
    sd = float(arr[mask].std(ddof=1))
    if sd == 0.0:
        raise DegenerateCrossSection("constant cross-section")
    out = np.full(arr.shape, np.nan)
    out[mask] = (arr[mask] - arr[mask].mean()) / sd
    return out


def forward_return_bps(
    abn_ret: Mapping[WeekStamp, float], week: WeekStamp, horizon: Horizon
) -> float:
    """Forward abnormal return for one horizon, in basis points.

    W1..W4 are the single week t+h; W5_52 compounds weeks t+5 through
    t+52. Every week in the horizon must be present.
    """
    if horizon is Horizon.W5_52:
        first, last = horizon.value
        growth = 1.0
        for step in range(first, last + 1):
            value = abn_ret.get(week.add(step))
            if value is None:
                raise MissingFutureWeeks(f"{week}: missing week t+{step}")
            growth *= 1.0 + value
        return (growth - 1.0) * BPS
    value = abn_ret.get(week.add(horizon.value))
    if value is None:
        raise MissingFutureWeeks(f"{week}: missing week t+{horizon.value}")
    return value * BPS


# --- vectorized panel construction ------------------------------------------


def _svi_frame(rows: Iterable[SviObservation]) -> pd.DataFrame:
    data = [(r.ticker, r.week.index, r.svi) for r in rows]
    return pd.DataFrame(data, columns=["ticker", "widx", "svi"])


def _rolling_asvi(svi: pd.Series) -> pd.Series:
    """ASVI over a contiguously indexed weekly series (NaN where undefined)."""
    positive = svi.where(svi > 0)
    med8 = positive.shift(1).rolling(MEDIAN_WINDOW, min_periods=MEDIAN_WINDOW).median()
    return np.log(positive) - np.log(med8)


def _per_ticker_attention(svi_rows: Iterable[SviObservation], value_name: str) -> pd.DataFrame:
    """Reindex each ticker to a contiguous week range and apply the ASVI rule."""
    frame = _svi_frame(svi_rows)
    pieces = []
    for ticker, grp in frame.groupby("ticker", sort=True):
        idx = pd.RangeIndex(grp["widx"].min(), grp["widx"].max() + 1)
        series = grp.set_index("widx")["svi"].astype(float).reindex(idx)
        out = pd.DataFrame(
            {
                "ticker": ticker,
                "widx": idx,
                f"{value_name}_raw": series.to_numpy(),
                value_name: _rolling_asvi(series).to_numpy(),
            }
        )
        pieces.append(out)
    if not pieces:
        return pd.DataFrame(columns=["ticker", "widx", f"{value_name}_raw", value_name])
    return pd.concat(pieces, ignore_index=True)


def build_attention_panel(
    svi: Sequence[SviObservation],
    market: Sequence[WeeklyMarketRow],
    *,
    svi_name: Sequence[SviObservation] | None = None,
    svi_product: Sequence[SviObservation] | None = None,
    dash5: Sequence[Dash5Record] | None = None,
    dash5_totals: Mapping[tuple[str, Month], int] | None = None,
    turnover_window: int = TURNOVER_WINDOW,
    turnover_min_obs: int = TURNOVER_MIN_OBS,
) -> pd.DataFrame:
    """Assemble the ticker-week panel every study starts from.

    One row per market observation, carrying raw and derived columns;
    failed preconditions (short history, zeros, zero dispersion) surface
    as NaN. Forward abnormal-return columns are attached for every
    horizon in :class:`Horizon`.
    """
    if not market:
        return pd.DataFrame()
    base = pd.DataFrame(
        [
            (r.ticker, r.week.index, r.week.week_start, r.ret, r.turnover,
             r.market_cap, r.news_count, r.benchmark_ret)
            for r in market
        ],
        columns=["ticker", "widx", "week_start", "ret", "turnover",
                 "market_cap", "news_count", "benchmark_ret"],
    )
    base = base.sort_values(["ticker", "widx"], kind="mergesort").reset_index(drop=True)

    pieces = []
    for ticker, grp in base.groupby("ticker", sort=True):
        idx = pd.RangeIndex(grp["widx"].min(), grp["widx"].max() + 1)
        g = grp.set_index("widx").reindex(idx)
        g["ticker"] = ticker

        abn = g["ret"] - g["benchmark_ret"]
        g["abn_ret"] = abn
        g["abs_abn_ret"] = abn.abs()

        log_to = np.log(g["turnover"] + TURNOVER_EPS)
        trail_mean = log_to.shift(1).rolling(turnover_window, min_periods=turnover_min_obs).mean()
        trail_sd = log_to.shift(1).rolling(turnover_window, min_periods=turnover_min_obs).std(ddof=1)
        z = (log_to - trail_mean) / trail_sd.where(trail_sd > 0)
        g["abn_turnover"] = z

        g["news_dummy"] = (g["news_count"] > 0).astype(float)
        g["log_mkt_cap"] = np.log(g["market_cap"])

        # forward abnormal returns in bps; any gap inside a horizon -> NaN
        for h in (Horizon.W1, Horizon.W2, Horizon.W3, Horizon.W4):
            g[forward_column(h)] = abn.shift(-h.value) * BPS
        log_growth = np.log1p(abn)
        first, last = Horizon.W5_52.value
        width = last - first + 1
        rolled = log_growth.rolling(width, min_periods=width).sum()
        g[forward_column(Horizon.W5_52)] = np.expm1(rolled.shift(-last)) * BPS

        g = g.reset_index().rename(columns={"index": "widx"})
        pieces.append(g[g["week_start"].notna()])
    panel = pd.concat(pieces, ignore_index=True)

    ticker_att = _per_ticker_attention(svi, "asvi").rename(columns={"asvi_raw": "svi"})
    panel = panel.merge(ticker_att, on=["ticker", "widx"], how="left")
    panel["log_svi"] = np.log(panel["svi"].where(panel["svi"] > 0))

    if svi_name is not None:
        name_frame = _svi_frame(svi_name).rename(columns={"svi": "name_svi"})
        panel = panel.merge(name_frame, on=["ticker", "widx"], how="left")
    else:
        panel["name_svi"] = np.nan

    if svi_product is not None:
        prod_att = _per_ticker_attention(svi_product, "apsvi").drop(columns=["apsvi_raw"])
        panel = panel.merge(prod_att, on=["ticker", "widx"], how="left")
    else:
        panel["apsvi"] = np.nan

    panel["midx"] = pd.Series(
        [Month(d.year, d.month).index for d in panel["week_start"]], index=panel.index
    )
    if dash5 is not None and dash5_totals is not None:
        pct = dash5_pct_by_month(dash5, dash5_totals)
        panel = panel.merge(pct, on=["ticker", "midx"], how="left")
    else:
        panel["dash5_pct"] = np.nan

    ordered = [
        "ticker", "widx", "week_start", "midx", "svi", "name_svi", "log_svi",
        "asvi", "apsvi", "ret", "benchmark_ret", "abn_ret", "abs_abn_ret",
        "turnover", "abn_turnover", "news_count", "news_dummy",
        "log_mkt_cap", "market_cap", "dash5_pct",
    ] + [forward_column(h) for h in Horizon]
    return panel[ordered]


def dash5_pct_by_month(
    dash5: Sequence[Dash5Record],
    totals: Mapping[tuple[str, Month], int],
) -> pd.DataFrame:
    """Dash-5 share of volume per (ticker, month): bucket shares over total."""
    sums: dict[tuple[str, Month], int] = {}
    for rec in dash5:
        key = (rec.ticker, rec.month)
        sums[key] = sums.get(key, 0) + rec.shares
    rows = []
    for (ticker, month), shares in sums.items():
        total = totals.get((ticker, month))
        if total is None or total <= 0:
            continue
        rows.append((ticker, month.index, shares / total))
    return pd.DataFrame(rows, columns=["ticker", "midx", "dash5_pct"])
