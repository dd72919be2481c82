"""The study battery: correlations, VAR lead-lag, retail flow elasticities,
price-pressure regressions, and the offering event / cross-section analyses.

Each study takes a :class:`StudyInputs` bundle plus an optional period and
returns a :class:`~svipanel.tables.StudyTable` (the event study also
returns its profile series).
"""

from __future__ import annotations

import datetime as dt
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np
import pandas as pd

from .attention import (
    Horizon,
    build_attention_panel,
    compute_asvi,
    forward_column,
)
from .datamodel import (
    Bucket,
    Dash5Record,
    IpoRecord,
    Month,
    SviObservation,
    WeeklyMarketRow,
    WeekStamp,
    week_of,
)
from .econ import (
    BootstrapConfig,
    block_bootstrap_pvalue,
    corr_matrix,
    fama_macbeth,
    ols,
    var1,
    var_aggregate,
    welch_t_test,
)
from .errors import (
    EmptyInput,
    EmptyWindow,
    InsufficientHistory,
    InvalidConfig,
    InvalidRange,
    RankDeficient,
    TooFewIpos,
    TooFewObservations,
    ZeroSvi,
)
from .ingest import (
    IngestReport,
    NoiseTickerList,
    apply_ipo_exclusions,
    filter_noise_tickers,
    load_dash5,
    load_ipo,
    load_market,
    load_noise_tickers,
    load_svi,
)
from .datamodel import KeywordKind
from .tables import Cell, StudyTable


@dataclass(frozen=True)
class PeriodSpec:
    """Half-open week range [start, end); weeks at end belong to the next one."""

    start: WeekStamp
    end: WeekStamp
    label: str

    def __post_init__(self) -> None:
        if not self.start < self.end:
            raise InvalidConfig(f"period start {self.start} not before end {self.end}")

    def contains(self, week: WeekStamp) -> bool:
        return self.start <= week < self.end


def period_for_years(first_year: int, last_year: int, label: str | None = None) -> PeriodSpec:
    """Weeks from the one containing Jan 1 of ``first_year`` up to (not
    including) the week containing Jan 1 after ``last_year``."""
    return PeriodSpec(
        start=week_of(dt.date(first_year, 1, 1)),
        end=week_of(dt.date(last_year + 1, 1, 1)),
        label=label or f"{first_year}-{last_year}",
    )


PERIODS: dict[str, PeriodSpec] = {
    "2004-2008": period_for_years(2004, 2008),
    "2009-2019": period_for_years(2009, 2019),
}


def resolve_period(label: str | None) -> PeriodSpec | None:
    """Built-in label, "all"/empty for no filter, or "YYYY-YYYY"."""
    if label is None or label in ("", "all"):
        return None
    if label in PERIODS:
        return PERIODS[label]
    try:
        first, last = label.split("-")
        return period_for_years(int(first), int(last))
    except ValueError:
        raise InvalidConfig(f"unrecognized period {label!r}") from None


@dataclass
class StudyInputs:
    """Everything the studies can consume, as validated records."""

    svi: list[SviObservation]
    market: list[WeeklyMarketRow]
    svi_name: list[SviObservation] = field(default_factory=list)
    svi_product: list[SviObservation] = field(default_factory=list)
    dash5: list[Dash5Record] = field(default_factory=list)
    dash5_totals: dict[tuple[str, Month], int] = field(default_factory=dict)
    ipo: list[IpoRecord] = field(default_factory=list)
    noise: NoiseTickerList | None = None


DATASET_FILES = {
    "svi": "svi.csv",
    "svi_name": "svi_name.csv",
    "svi_product": "svi_product.csv",
    "market": "market.csv",
    "dash5": "dash5.csv",
    "ipo": "ipo.csv",
    "noise": "noise_tickers.txt",
}


def load_inputs(data_dir: str | Path) -> tuple[StudyInputs, dict[str, IngestReport]]:
    """Read a dataset directory; svi.csv and market.csv are required."""
    root = Path(data_dir)
    reports: dict[str, IngestReport] = {}
    svi, reports["svi"] = load_svi(root / DATASET_FILES["svi"], KeywordKind.TICKER)
    market, reports["market"] = load_market(root / DATASET_FILES["market"])
    inputs = StudyInputs(svi=svi, market=market)
    name_path = root / DATASET_FILES["svi_name"]
    if name_path.exists():
        inputs.svi_name, reports["svi_name"] = load_svi(name_path, KeywordKind.NAME)
    product_path = root / DATASET_FILES["svi_product"]
    if product_path.exists():
        inputs.svi_product, reports["svi_product"] = load_svi(
            product_path, KeywordKind.PRODUCT
        )
    dash5_path = root / DATASET_FILES["dash5"]
    if dash5_path.exists():
        inputs.dash5, inputs.dash5_totals, reports["dash5"] = load_dash5(dash5_path)
    ipo_path = root / DATASET_FILES["ipo"]
    if ipo_path.exists():
        inputs.ipo, reports["ipo"] = load_ipo(ipo_path)
    noise_path = root / DATASET_FILES["noise"]
    if noise_path.exists():
        inputs.noise = load_noise_tickers(noise_path)
    return inputs, reports


STAR_NOTE = "stars: *** p<0.01, ** p<0.05, * p<0.10"


def _filtered_inputs(inputs: StudyInputs, drop_noise: bool) -> tuple[StudyInputs, float | None]:
    if not drop_noise:
        return inputs, None
    if inputs.noise is None or len(inputs.noise) == 0:
        raise InvalidConfig("noise-ticker removal requested without a noise list")
    market, fraction = filter_noise_tickers(inputs.market, inputs.noise)
    svi, _ = filter_noise_tickers(inputs.svi, inputs.noise)
    name, _ = filter_noise_tickers(inputs.svi_name, inputs.noise)
    product, _ = filter_noise_tickers(inputs.svi_product, inputs.noise)
    dash5, _ = filter_noise_tickers(inputs.dash5, inputs.noise)
    out = StudyInputs(
        svi=svi,
        market=market,
        svi_name=name,
        svi_product=product,
        dash5=dash5,
        dash5_totals=inputs.dash5_totals,
        ipo=inputs.ipo,
        noise=inputs.noise,
    )
    return out, fraction


def study_panel(
    inputs: StudyInputs,
    period: PeriodSpec | None = None,
    *,
    drop_noise: bool = False,
) -> tuple[pd.DataFrame, float | None]:
    """Attention panel restricted to a period, optionally noise-filtered."""
    use, fraction = _filtered_inputs(inputs, drop_noise)
    panel = build_attention_panel(
        use.svi,
        use.market,
        svi_name=use.svi_name or None,
        svi_product=use.svi_product or None,
        dash5=use.dash5 or None,
        dash5_totals=use.dash5_totals or None,
    )
    if period is not None and len(panel):
        keep = (panel["widx"] >= period.start.index) & (panel["widx"] < period.end.index)
        panel = panel[keep].reset_index(drop=True)
    return panel, fraction


# --- correlation study ------------------------------------------------------

CORR_VARS = [
    ("SVI", "svi_pos"),
    ("NAME_SVI", "name_svi_pos"),
    ("Abn Ret", "abs_abn_ret"),
    ("Abn Turnover", "abn_turnover"),
    ("News", "news_count"),
]


def run_correlation_study(
    inputs: StudyInputs, period: PeriodSpec | None = None
) -> StudyTable:
    """Pooled pairwise correlations between the attention and control series.

    Zero search-volume weeks are treated as missing, correlations are
    pairwise-complete, and only the lower triangle is rendered.
    """
    panel, _ = study_panel(inputs, period)
    if not len(panel):
        raise EmptyInput("no panel rows in period")
    frame = pd.DataFrame(
        {
            "svi_pos": panel["svi"].where(panel["svi"] > 0),
            "name_svi_pos": panel["name_svi"].where(panel["name_svi"] > 0),
            "abs_abn_ret": panel["abs_abn_ret"],
            "abn_turnover": panel["abn_turnover"],
            "news_count": panel["news_count"].astype(float),
        }
    )
    labels = [label for label, _ in CORR_VARS]
    matrix = corr_matrix(frame[[col for _, col in CORR_VARS]], names=labels)
    table = StudyTable(
        title="Pairwise correlations",
        row_labels=labels[1:],
        col_labels=labels[:-1],
        footnotes=[
            "pairwise-complete Pearson correlations over pooled ticker-weeks",
            "zero-SVI weeks treated as missing; Abn Ret in absolute value",
            f"rows: {len(frame)}",
        ],
    )
    for i in range(1, len(labels)):
        for j in range(i):
            table.set(i - 1, j, Cell(value=float(matrix[i, j])))
    return table


# --- VAR lead-lag study -----------------------------------------------------

VAR_SERIES = [
    ("SVI", "log_svi"),
    ("Abn Turnover", "abn_turnover"),
    ("Abn Ret", "abs_abn_ret"),
    ("News", "log1p_news"),
]


def run_var_leadlag_study(
    inputs: StudyInputs,
    period: PeriodSpec | None = None,
    cfg: BootstrapConfig | None = None,
    *,
    min_obs: int = 104,
    n_threads: int = 1,
) -> StudyTable:
    """Average per-ticker weekly VAR(1) with block-bootstrap p-values.

    Series: log SVI, abnormal turnover, absolute abnormal return, and
    log(1 + news count); tickers need ``min_obs`` complete weeks.
    """
    if cfg is None:
        cfg = BootstrapConfig()
    panel, _ = study_panel(inputs, period)
    if not len(panel):
        raise EmptyInput("no panel rows in period")
    panel = panel.assign(log1p_news=np.log1p(panel["news_count"].astype(float)))
    cols = [col for _, col in VAR_SERIES]
    panels: dict[str, np.ndarray] = {}
    for ticker, grp in panel.groupby("ticker", sort=True):
        idx = pd.RangeIndex(grp["widx"].min(), grp["widx"].max() + 1)
        block = grp.set_index("widx")[cols].reindex(idx).to_numpy(dtype=float)
        if int(np.isfinite(block).all(axis=1).sum()) >= min_obs:
            panels[ticker] = block
    if not panels:
        raise EmptyInput(f"no ticker reaches {min_obs} complete weeks")
    names = tuple(label for label, _ in VAR_SERIES)
    fits = {t: var1(a, names=names, min_obs=min_obs) for t, a in panels.items()}
    agg = var_aggregate(fits)
    agg.boot_p = block_bootstrap_pvalue(
        panels, cfg, min_obs=min_obs, n_threads=n_threads
    )
    k = len(names)
    table = StudyTable(
        title="Weekly VAR(1), cross-ticker average",
        row_labels=[f"{label} (t)" for label in names],
        col_labels=[f"{label} (t-1)" for label in names] + ["R^2"],
        footnotes=[
            "cell: average lag coefficient, block-bootstrap p-value in parentheses",
            f"moving-block bootstrap: block length {cfg.block_len}, {cfg.reps} replicates",
            f"tickers with >= {min_obs} complete weeks: {agg.n_tickers}",
            "SVI enters in logs, news as log(1 + count)",
            STAR_NOTE,
        ],
    )
    for i in range(k):
        for j in range(k):
            p = float(agg.boot_p[i, j])
            table.set(i, j, Cell(value=float(agg.avg_coef[i, j]), paren=p, p=p))
        table.set(i, k, Cell(value=float(agg.avg_r2[i])))
    return table


# --- retail order-flow study ------------------------------------------------

SIZE_GROUPS: dict[str, tuple[Bucket, ...]] = {
    "100-1999": (Bucket.B1, Bucket.B2),
    "100-9999": (Bucket.B1, Bucket.B2, Bucket.B3, Bucket.B4),
}

RETAIL_REGRESSORS = [
    ("Delta SVI(t-1,t)", "d_svi"),
    ("Ret(t)", "ret_m"),
    ("Abn Ret(t)", "abs_abn_m"),
    ("News Dummy(t)", "news_m"),
]


def _monthly_market(market: Sequence[WeeklyMarketRow]) -> pd.DataFrame:
    rows = [
        (r.ticker, r.week.month().index, r.ret, r.benchmark_ret, r.news_count)
        for r in market
    ]
    f = pd.DataFrame(rows, columns=["ticker", "midx", "ret", "bench", "news"])
    grouped = f.groupby(["ticker", "midx"]).agg(
        ret_m=("ret", lambda s: float(np.prod(1.0 + s.to_numpy())) - 1.0),
        bench_m=("bench", lambda s: float(np.prod(1.0 + s.to_numpy())) - 1.0),
        news_m=("news", lambda s: float((s > 0).any())),
    )
    grouped["abs_abn_m"] = (grouped["ret_m"] - grouped["bench_m"]).abs()
    return grouped.reset_index()


def run_retail_study(
    inputs: StudyInputs,
    period: PeriodSpec | None = None,
    size_group: str | Sequence[Bucket] = "100-1999",
    *,
    delta: str = "log",
    estimator: str = "pooled",
) -> StudyTable:
    """Monthly retail order-flow changes regressed on search-volume changes.

    Delta Order is the change in the size group's order count, Delta
    Turnover the change in its share volume; both default to log
    differences (``delta="arith"`` switches to growth rates). Estimated
    by pooled OLS with HC1 errors, or per-ticker averages with
    ``estimator="by-ticker"``.
    """
    if isinstance(size_group, str):
        if size_group not in SIZE_GROUPS:
            raise InvalidConfig(f"unknown size group {size_group!r}")
        buckets = SIZE_GROUPS[size_group]
        group_label = size_group
    else:
        buckets = tuple(size_group)
        group_label = "+".join(b.name for b in buckets)
    if delta not in ("log", "arith"):
        raise InvalidConfig(f"delta must be 'log' or 'arith', got {delta!r}")
    if estimator not in ("pooled", "by-ticker"):
        raise InvalidConfig(f"unknown estimator {estimator!r}")
    if not inputs.dash5:
        raise EmptyInput("no dash-5 records")

    flows = pd.DataFrame(
        [
            (r.ticker, r.month.index, r.orders, r.shares)
            for r in inputs.dash5
            if r.bucket in buckets
        ],
        columns=["ticker", "midx", "orders", "shares"],
    )
    if not len(flows):
        raise EmptyInput("no dash-5 records in the requested buckets")
    flows = flows.groupby(["ticker", "midx"], as_index=False).sum()

    svi_monthly = pd.DataFrame(
        [(r.ticker, r.week.month().index, r.svi) for r in inputs.svi],
        columns=["ticker", "midx", "svi"],
    ).groupby(["ticker", "midx"], as_index=False).sum()

    merged = flows.merge(svi_monthly, on=["ticker", "midx"], how="inner")
    merged = merged.merge(_monthly_market(inputs.market), on=["ticker", "midx"], how="inner")

    prev = merged[["ticker", "midx", "orders", "shares", "svi"]].copy()
    prev["midx"] += 1
    merged = merged.merge(
        prev, on=["ticker", "midx"], how="inner", suffixes=("", "_prev")
    )

    def delta_col(cur: pd.Series, prior: pd.Series) -> np.ndarray:
        c = cur.to_numpy(dtype=float)
        p = prior.to_numpy(dtype=float)
        if delta == "log":
            with np.errstate(divide="ignore", invalid="ignore"):
                out = np.where((c > 0) & (p > 0), np.log(c) - np.log(p), np.nan)
        else:
            with np.errstate(divide="ignore", invalid="ignore"):
                out = np.where(p != 0, (c - p) / p, np.nan)
        return out

    merged["d_order"] = delta_col(merged["orders"], merged["orders_prev"])
    merged["d_turnover"] = delta_col(merged["shares"], merged["shares_prev"])
    merged["d_svi"] = delta_col(merged["svi"], merged["svi_prev"])

    if period is not None:
        keep = [
            period.contains(week_of(Month.from_index(m).first_day()))
            for m in merged["midx"]
        ]
        merged = merged[keep]

    labels = [label for label, _ in RETAIL_REGRESSORS]
    xcols = [col for _, col in RETAIL_REGRESSORS]
    table = StudyTable(
        title=f"Retail order flow, sizes {group_label}",
        row_labels=labels + ["Constant", "R^2"],
        col_labels=["Delta Order", "Delta Turnover"],
        footnotes=[],
    )
    counts = {}
    for col_idx, dep in enumerate(["d_order", "d_turnover"]):
        sub = merged[[dep] + xcols].dropna()
        if len(sub) <= len(xcols) + 1:
            raise TooFewObservations(f"{len(sub)} usable ticker-months for {dep}")
        y = sub[dep].to_numpy(dtype=float)
        X = sub[xcols].to_numpy(dtype=float)
        if estimator == "pooled":
            fit = ols(y, X, names=labels, intercept=True, cov="hc1")
            coefs = fit.coef
            ses = fit.se
            ps = fit.p
            r2 = fit.r2
        else:
            per = []
            r2s = []
            for _, tick_rows in sub.assign(ticker=merged.loc[sub.index, "ticker"]).groupby("ticker"):
                if len(tick_rows) < len(xcols) + 3:
                    continue
                try:
                    # a single ticker can have a degenerate column, e.g. a
                    # news dummy that is 1 in every month
                    f = ols(
                        tick_rows[dep].to_numpy(dtype=float),
                        tick_rows[xcols].to_numpy(dtype=float),
                        names=labels,
                        intercept=True,
                        cov="classical",
                    )
                except RankDeficient:
                    continue
                per.append(f.coef)
                r2s.append(f.r2)
            if len(per) < 2:
                raise TooFewObservations("fewer than two tickers support the fit")
            arr = np.vstack(per)
            coefs = arr.mean(axis=0)
            ses = arr.std(axis=0, ddof=1) / math.sqrt(arr.shape[0])
            from scipy import stats as _stats

            with np.errstate(divide="ignore", invalid="ignore"):
                tvals = np.where(ses > 0, coefs / np.where(ses > 0, ses, 1.0), 0.0)
            ps = 2.0 * _stats.t.sf(np.abs(tvals), arr.shape[0] - 1)
            r2 = float(np.mean(r2s))
        counts[dep] = len(sub)
        for row_idx in range(len(labels) + 1):
            table.set(
                row_idx,
                col_idx,
                Cell(value=float(coefs[row_idx]), paren=float(ses[row_idx]), p=float(ps[row_idx])),
            )
        table.set(len(labels) + 1, col_idx, Cell(value=float(r2)))
    table.footnotes = [
        f"order-size group {group_label} shares per order; {delta} differences; {estimator} estimator",
        "HC1 standard errors in parentheses" if estimator == "pooled"
        else "cross-ticker standard errors in parentheses",
        f"ticker-months: Delta Order {counts['d_order']}, Delta Turnover {counts['d_turnover']}",
        STAR_NOTE,
    ]
    return table


# --- price-pressure study ---------------------------------------------------

PRESSURE_REGRESSORS = [
    ("ASVI", "asvi"),
    ("Log Mkt Cap x ASVI", "mktcap_x_asvi"),
    ("Log Mkt Cap", "log_mkt_cap"),
    ("Pct Dash-5 x ASVI", "dash5_x_asvi"),
    ("Pct Dash-5", "dash5_pct"),
    ("APSVI", "apsvi"),
    ("Abn Ret", "abs_abn_ret"),
    ("News Dummy", "news_dummy"),
    ("Abn Turnover", "abn_turnover"),
]

HORIZON_LABELS = [
    (Horizon.W1, "Week 1"),
    (Horizon.W2, "Week 2"),
    (Horizon.W3, "Week 3"),
    (Horizon.W4, "Week 4"),
    (Horizon.W5_52, "Weeks 5-52"),
]


def _zscore_block(values: np.ndarray) -> np.ndarray:
    mask = np.isfinite(values)
    if mask.sum() < 3:
        return np.full(values.shape, np.nan)
    sd = values[mask].std(ddof=1)
    if sd == 0:
        return np.full(values.shape, np.nan)
    out = np.full(values.shape, np.nan)
    out[mask] = (values[mask] - values[mask].mean()) / sd
    return out


def run_price_pressure_study(
    inputs: StudyInputs,
    period: PeriodSpec | None = None,
    drop_noise: bool = False,
    *,
    nw_lags: int = 4,
    min_weeks: int = 10,
) -> StudyTable:
    """Fama-MacBeth regressions of forward abnormal returns on attention.

    Interaction regressors multiply per-week z-scores of their bases and
    are themselves re-standardized inside the weekly cross-sections, as
    are all other regressors. Dependent variables are forward abnormal
    returns in basis points over the five horizons.
    """
    panel, noise_fraction = study_panel(inputs, period, drop_noise=drop_noise)
    if not len(panel):
        raise EmptyInput("no panel rows in period")
    for base in ("asvi", "log_mkt_cap", "dash5_pct"):
        panel["z_" + base] = (
            panel.groupby("widx")[base].transform(
                lambda s: _zscore_block(s.to_numpy(dtype=float))
            )
        )
    panel["mktcap_x_asvi"] = panel["z_log_mkt_cap"] * panel["z_asvi"]
    panel["dash5_x_asvi"] = panel["z_dash5_pct"] * panel["z_asvi"]

    labels = [label for label, _ in PRESSURE_REGRESSORS]
    cols = [col for _, col in PRESSURE_REGRESSORS]
    table = StudyTable(
        title="Price pressure of attention",
        row_labels=labels + ["R^2"],
        col_labels=[label for _, label in HORIZON_LABELS],
        footnotes=[],
    )
    usage = []
    for col_idx, (horizon, h_label) in enumerate(HORIZON_LABELS):
        fit = fama_macbeth(
            panel.rename(columns=dict(zip(cols, labels))),
            horizon,
            labels,
            nw_lags=nw_lags,
            min_weeks=min_weeks,
        )
        for row_idx in range(len(labels)):
            table.set(
                row_idx,
                col_idx,
                Cell(
                    value=float(fit.mean_coef[row_idx]),
                    paren=float(fit.nw_se[row_idx]),
                    p=float(fit.p[row_idx]),
                ),
            )
        table.set(len(labels), col_idx, Cell(value=fit.r2))
        usage.append(f"{h_label}: {fit.n_weeks} weeks ({fit.skipped_weeks} skipped)")
    table.footnotes = [
        "dependent: forward abnormal return in basis points",
        f"Newey-West standard errors in parentheses, lag {nw_lags}",
        "regressors standardized within each weekly cross-section; weekly intercept not reported",
        "; ".join(usage),
        STAR_NOTE,
    ]
    if noise_fraction:
        # a filter that removed nothing leaves no trace, so the output is
        # byte-identical to an unfiltered run on the same panel
        from .tables import format_value

        table.footnotes.insert(
            0, f"noise tickers removed: fraction {format_value(noise_fraction)}"
        )
    return table


# --- offering studies -------------------------------------------------------


def compute_price_revision(offer_price: float, range_low: float, range_high: float) -> float:
    """Offer price over the midpoint of the filing range."""
    if not (0 < range_low <= range_high):
        raise InvalidRange(f"range [{range_low}, {range_high}] invalid")
    if offer_price <= 0:
        raise InvalidRange(f"offer price {offer_price} must be positive")
    return offer_price / ((range_low + range_high) / 2.0)


def compute_media(news_counts: Sequence[int]) -> float:
    """log(1 + total pre-listing article count)."""
    counts = list(news_counts)
    if not counts:
        raise EmptyWindow("no weeks in the filing-to-listing window")
    return math.log1p(float(sum(counts)))


def media_window_weeks(filing_date: dt.date, listing_date: dt.date) -> list[WeekStamp]:
    """Weeks contributing news between filing and the day before listing."""
    if filing_date >= listing_date:
        raise EmptyWindow("filing date must precede listing date")
    first = week_of(filing_date)
    last = week_of(listing_date - dt.timedelta(days=1))
    return [first.add(i) for i in range(last.index - first.index + 1)]


def _name_series(inputs: StudyInputs) -> dict[str, dict[WeekStamp, float]]:
    series: dict[str, dict[WeekStamp, float]] = {}
    for obs in inputs.svi_name:
        series.setdefault(obs.ticker, {})[obs.week] = float(obs.svi)
    return series


def _market_lookup(inputs: StudyInputs) -> dict[tuple[str, int], WeeklyMarketRow]:
    return {(r.ticker, r.week.index): r for r in inputs.market}


def run_ipo_event_study(
    inputs: StudyInputs,
    period: PeriodSpec | None = None,
    *,
    window: int = 8,
    min_group: int = 10,
) -> tuple[pd.DataFrame, StudyTable]:
    """Attention around listings and returns split by pre-listing attention.

    Returns the event-week profile (mean/median log SVI and abnormal SVI
    from -window to +window) and a table of first-day and weeks-5-52
    returns for offerings below and above the median pre-listing ASVI,
    with a Welch test on the first-day means.
    """
    kept, excluded = apply_ipo_exclusions(inputs.ipo)
    if period is not None:
        kept = [r for r in kept if period.contains(week_of(r.listing_date))]
    name_series = _name_series(inputs)
    market = _market_lookup(inputs)

    profile_rows = []
    sample = []
    for rec in kept:
        if rec.ticker is None or rec.ticker not in name_series:
            continue
        series = name_series[rec.ticker]
        w0 = week_of(rec.listing_date)
        logs: dict[int, float] = {}
        asvis: dict[int, float] = {}
        for e in range(-window, window + 1):
            week = w0.add(e)
            value = series.get(week)
            if value is not None and value > 0:
                logs[e] = math.log(value)
            try:
                asvis[e] = compute_asvi(series, week)
            except (InsufficientHistory, ZeroSvi):
                pass
        day1 = None
        row = market.get((rec.ticker, w0.index))
        if row is not None:
            day1 = row.ret
        growth = 1.0
        got = 0
        for step in range(5, 53):
            later = market.get((rec.ticker, w0.add(step).index))
            if later is not None:
                growth *= 1.0 + later.ret
                got += 1
        r5_52 = growth - 1.0 if got > 0 else None
        profile_rows.append((rec, logs, asvis))
        sample.append((rec, asvis.get(-1), day1, r5_52))

    profile = pd.DataFrame(
        [
            (
                e,
                _agg([lg.get(e) for _, lg, _ in profile_rows], np.mean),
                _agg([lg.get(e) for _, lg, _ in profile_rows], np.median),
                _agg([av.get(e) for _, _, av in profile_rows], np.mean),
                _agg([av.get(e) for _, _, av in profile_rows], np.median),
                sum(1 for _, lg, _ in profile_rows if e in lg),
                sum(1 for _, _, av in profile_rows if e in av),
            )
            for e in range(-window, window + 1)
        ],
        columns=[
            "event_week", "mean_log_svi", "median_log_svi",
            "mean_asvi", "median_asvi", "n_svi", "n_asvi",
        ],
    )

    usable = [(a, d, r) for _, a, d, r in sample if a is not None and d is not None]
    if len(usable) < 2 * min_group:
        raise TooFewIpos(f"{len(usable)} offerings with pre-listing attention < {2 * min_group}")
    pre = np.array([a for a, _, _ in usable])
    median = float(np.median(pre))
    high = [u for u in usable if u[0] > median]
    low = [u for u in usable if u[0] <= median]
    if len(high) < min_group or len(low) < min_group:
        raise TooFewIpos(
            f"degenerate attention split: {len(low)} low vs {len(high)} high"
        )

    def day1_of(group):
        return np.array([d for _, d, _ in group])

    def r552_of(group):
        return np.array([r for _, _, r in group if r is not None])

    welch = welch_t_test(day1_of(high), day1_of(low))

    table = StudyTable(
        title="Offering returns by pre-listing attention",
        row_labels=[
            "First day - Low ASVI",
            "First day - High ASVI",
            "Weeks 5-52 - Low ASVI",
            "Weeks 5-52 - High ASVI",
        ],
        col_labels=["Average return (%)", "Median return (%)"],
        footnotes=[
            f"groups split at the median pre-listing-week abnormal SVI ({len(low)} low, {len(high)} high)",
            f"Welch test, first-day means: t = {welch.t:.2f}, p = {welch.p:.4g}",
            f"offerings excluded upstream: {len(excluded)}",
        ],
    )
    for row_idx, values in enumerate(
        [day1_of(low), day1_of(high), r552_of(low), r552_of(high)]
    ):
        if values.size == 0:
            continue
        table.set(row_idx, 0, Cell(value=float(np.mean(values)) * 100.0))
        table.set(row_idx, 1, Cell(value=float(np.median(values)) * 100.0))
    return profile, table


def _agg(values, fn):
    vals = [v for v in values if v is not None]
    return float(fn(vals)) if vals else float("nan")


IPO_CONTROLS = ["Log(Offering Size)", "Log(Asset Size)", "Industry Return"]
IPO_DEFAULT_SPECS: list[list[str]] = [
    ["ASVI"],
    ["Media"],
    ["Price Revision"],
    ["ASVI"] + IPO_CONTROLS,
    ["Media"] + IPO_CONTROLS,
    ["Price Revision"] + IPO_CONTROLS,
    ["ASVI", "Media", "Price Revision"] + IPO_CONTROLS,
]


def run_ipo_cross_section(
    inputs: StudyInputs,
    period: PeriodSpec | None = None,
    model: Sequence[Sequence[str]] | None = None,
) -> StudyTable:
    """First-day returns regressed on attention, media, and price revision.

    Seven default column specifications: each main variable alone, each
    with the issuer controls, and the full model; OLS with HC1 errors.
    """
    specs = [list(s) for s in (model if model is not None else IPO_DEFAULT_SPECS)]
    for s in specs:
        if not s:
            raise InvalidConfig("a model specification needs at least one regressor")
    kept, _ = apply_ipo_exclusions(inputs.ipo)
    if period is not None:
        kept = [r for r in kept if period.contains(week_of(r.listing_date))]
    name_series = _name_series(inputs)
    market = _market_lookup(inputs)

    rows = []
    for rec in kept:
        if rec.ticker is None or rec.ticker not in name_series:
            continue
        w0 = week_of(rec.listing_date)
        listing_row = market.get((rec.ticker, w0.index))
        if listing_row is None:
            continue
        try:
            asvi_pre = compute_asvi(name_series[rec.ticker], w0.add(-1))
        except (InsufficientHistory, ZeroSvi):
            continue
        if rec.offering_size <= 0 or rec.asset_size <= 0:
            continue
        counts = [
            market[(rec.ticker, w.index)].news_count
            if (rec.ticker, w.index) in market
            else 0
            for w in media_window_weeks(rec.filing_date, rec.listing_date)
        ]
        rows.append(
            {
                "day1": listing_row.ret,
                "ASVI": asvi_pre,
                "Media": compute_media(counts),
                "Price Revision": compute_price_revision(
                    rec.offer_price, rec.range_low, rec.range_high
                ),
                "Log(Offering Size)": math.log(rec.offering_size),
                "Log(Asset Size)": math.log(rec.asset_size),
                "Industry Return": rec.industry_return,
            }
        )
    frame = pd.DataFrame(rows)
    if len(frame) < 10:
        raise TooFewIpos(f"{len(frame)} usable offerings < 10")

    all_vars = ["ASVI", "Media", "Price Revision"] + IPO_CONTROLS
    table = StudyTable(
        title="First-day return cross-section",
        row_labels=all_vars + ["Constant", "R^2"],
        col_labels=[f"({i + 1})" for i in range(len(specs))],
        footnotes=[
            f"offerings: {len(frame)}; HC1 standard errors in parentheses",
            "dependent: first-day return over the offer price",
            STAR_NOTE,
        ],
    )
    for col_idx, spec_vars in enumerate(specs):
        unknown = [v for v in spec_vars if v not in all_vars]
        if unknown:
            raise InvalidConfig(f"unknown regressors {unknown}")
        fit = ols(
            frame["day1"].to_numpy(dtype=float),
            frame[spec_vars].to_numpy(dtype=float),
            names=spec_vars,
            intercept=True,
            cov="hc1",
        )
        for name in spec_vars + ["const"]:
            pos = fit.names.index(name)
            row_idx = len(all_vars) if name == "const" else all_vars.index(name)
            table.set(
                row_idx,
                col_idx,
                Cell(
                    value=float(fit.coef[pos]),
                    paren=float(fit.se[pos]),
                    p=float(fit.p[pos]),
                ),
            )
        table.set(len(all_vars) + 1, col_idx, Cell(value=fit.r2))
    return table
