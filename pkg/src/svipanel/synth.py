"""Synthetic panel generator with planted effects, plus naive reference
implementations of the estimators used to cross-check the fast paths.

The generator is byte-deterministic for a given config: all randomness
flows from one ``default_rng(seed)`` in a fixed draw order, and every
written value is integer or repr-round-trip float.
"""

from __future__ import annotations

import datetime as dt
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .datamodel import (
    Bucket,
    Dash5Record,
    IpoRecord,
    Month,
    SecurityType,
    SviObservation,
    WeeklyMarketRow,
    WeekStamp,
    KeywordKind,
    week_of,
)
from .errors import InvalidConfig
from .ingest import (
    NoiseTickerList,
    write_dash5_csv,
    write_ipo_csv,
    write_market_csv,
    write_noise_tickers,
    write_svi_csv,
)
from .studies import StudyInputs

BUCKET_ORDER_SIZES = {Bucket.B1: 250.0, Bucket.B2: 1000.0, Bucket.B3: 3000.0, Bucket.B4: 7500.0}
BUCKET_SHARE_WEIGHTS = {Bucket.B1: 0.4, Bucket.B2: 0.3, Bucket.B3: 0.2, Bucket.B4: 0.1}


@dataclass(frozen=True)
class DgpConfig:
    """Knobs for the planted-effect panel; defaults give a clean recovery."""

    seed: int = 0
    n_tickers: int = 300
    n_weeks: int = 260
    start_week: WeekStamp = field(default_factory=lambda: WeekStamp(dt.date(2009, 1, 5)))
    attention_ar: float = 0.3
    attention_shock_scale: float = 0.25
    svi_base: float = 40.0
    name_svi_corr: float = 0.10
    product_svi_corr: float = 0.30
    pressure_w1_bps: float = 20.0
    pressure_reversal_bps: float = -30.0
    pressure_mktcap_bps: float = 0.0
    abn_ret_noise: float = 0.006
    market_vol: float = 0.015
    svi_to_turnover: float = 0.20
    turnover_ar: float = 0.30
    turnover_noise: float = 0.15
    retail_elasticity: float = 0.10
    retail_noise: float = 0.05
    dash5_fraction_low: float = 0.08
    dash5_fraction_high: float = 0.30
    news_rate: float = 0.8
    news_attention_load: float = 0.6
    ipo_count: int = 0
    ipo_spike: float = 0.28
    ipo_day1_base: float = 0.12
    ipo_day1_group_effect: float = 0.06
    ipo_day1_asvi_loading: float = 0.0
    ipo_day1_noise: float = 0.05
    ipo_attention_scale: float = 0.35
    ipo_price_revision_loading: float = 0.0
    ipo_reversal_5_52: float = 0.0
    ipo_post_noise: float = 0.02
    noise_ticker_rate: float = 0.0

    def __post_init__(self) -> None:
        if self.n_tickers < 20:
            raise InvalidConfig(f"n_tickers {self.n_tickers} < 20")
        if self.n_weeks < 120:
            raise InvalidConfig(f"n_weeks {self.n_weeks} < 120")
        if self.seed < 0:
            raise InvalidConfig("seed must be non-negative")
        if not 0 <= self.attention_ar < 1:
            raise InvalidConfig("attention_ar must lie in [0, 1)")
        if not -1 <= self.name_svi_corr <= 1:
            raise InvalidConfig("name_svi_corr must lie in [-1, 1]")
        if self.ipo_count < 0:
            raise InvalidConfig("ipo_count must be non-negative")
        if self.ipo_count > 0 and self.n_weeks < 130:
            raise InvalidConfig("offerings need n_weeks >= 130")
        if not 0 <= self.noise_ticker_rate < 1:
            raise InvalidConfig("noise_ticker_rate must lie in [0, 1)")


@dataclass
class SynthData:
    inputs: StudyInputs
    truth: dict[str, float]


def _ticker_name(i: int) -> str:
    letters = ""
    n = i
    for _ in range(4):
        letters = chr(ord("A") + n % 26) + letters
        n //= 26
    return letters


def _ipo_ticker(j: int) -> str:
    if j < 26:
        return "IPO" + chr(ord("A") + j)
    return "IPO" + chr(ord("A") + j // 26 - 1) + chr(ord("A") + j % 26)


def _ar1(rng: np.random.Generator, n: int, t: int, rho: float, scale: float) -> np.ndarray:
    shocks = rng.standard_normal((n, t)) * scale
    out = np.empty((n, t))
    stationary = scale / math.sqrt(1.0 - rho * rho) if rho else scale
    out[:, 0] = rng.standard_normal(n) * stationary
    for s in range(1, t):
        out[:, s] = rho * out[:, s - 1] + shocks[:, s]
    return out


def _svi_ints(levels: np.ndarray) -> tuple[np.ndarray, float]:
    raw = np.rint(levels)
    clipped = np.clip(raw, 1, 100)
    clip_rate = float(np.mean((raw < 1) | (raw > 100)))
    return clipped.astype(int), clip_rate


def _rolling_median8(values: np.ndarray) -> np.ndarray:
    # med over weeks [t-8, t-1] for t >= 8, NaN before
    n, t = values.shape
    out = np.full((n, t), np.nan)
    if t > 8:
        windows = np.lib.stride_tricks.sliding_window_view(values.astype(float), 8, axis=1)
        out[:, 8:] = np.median(windows[:, : t - 8, :], axis=2)
    return out


def generate(cfg: DgpConfig) -> SynthData:
    """Build one dataset; see the module docstring for determinism rules."""
    rng = np.random.default_rng(cfg.seed)
    n, t = cfg.n_tickers, cfg.n_weeks
    weeks = [cfg.start_week.add(s) for s in range(t)]
    tickers = [_ticker_name(i) for i in range(n)]

    # per-ticker statics, one vectorized draw each
    # keep the per-ticker scale spread narrow: the pooled level correlation
    # between the keyword kinds must stay close to the planted value, and
    # independent per-ticker scales dilute it
    base = cfg.svi_base * rng.uniform(0.9, 1.1, n)
    name_base = cfg.svi_base * rng.uniform(0.9, 1.1, n)
    product_base = cfg.svi_base * rng.uniform(0.9, 1.1, n)
    log_cap = rng.normal(21.0, 1.2, n)
    turnover_base = 0.02 * np.exp(rng.normal(0.0, 0.3, n))
    dash5_frac = rng.uniform(cfg.dash5_fraction_low, cfg.dash5_fraction_high, n)
    total_vol_base = np.exp(rng.normal(16.0, 0.5, n))

    # latent attention and its imperfect proxies
    x = _ar1(rng, n, t, cfg.attention_ar, cfg.attention_shock_scale)
    eta_name = _ar1(rng, n, t, cfg.attention_ar, cfg.attention_shock_scale)
    eta_prod = _ar1(rng, n, t, cfg.attention_ar, cfg.attention_shock_scale)
    rho_n, rho_p = cfg.name_svi_corr, cfg.product_svi_corr
    x_name = rho_n * x + math.sqrt(max(0.0, 1 - rho_n**2)) * eta_name
    x_prod = rho_p * x + math.sqrt(max(0.0, 1 - rho_p**2)) * eta_prod

    svi, svi_clip = _svi_ints(base[:, None] * np.exp(x))
    name_svi, name_clip = _svi_ints(name_base[:, None] * np.exp(x_name))
    prod_svi, prod_clip = _svi_ints(product_base[:, None] * np.exp(x_prod))

    market_factor = rng.normal(0.0, cfg.market_vol, t)
    abn_eps = rng.standard_normal((n, t)) * cfg.abn_ret_noise
    turn_eps = rng.standard_normal((n, t)) * cfg.turnover_noise
    news = rng.poisson(cfg.news_rate * np.exp(cfg.news_attention_load * x))

    # the pressure paths load on the z-scored measured abnormal SVI;
    # compute it exactly as the attention layer will
    med8 = _rolling_median8(svi.astype(float))
    asvi = np.full((n, t), np.nan)
    asvi[:, 8:] = np.log(svi[:, 8:].astype(float)) - np.log(med8[:, 8:])
    z = np.zeros((n, t))
    block = asvi[:, 8:]
    mu = block.mean(axis=0)
    sd = block.std(axis=0, ddof=1)
    z[:, 8:] = (block - mu) / sd
    z_cap = (log_cap - log_cap.mean()) / log_cap.std(ddof=1)

    pad = np.zeros((n, 53))
    zc = np.concatenate([pad, np.cumsum(z, axis=1)], axis=1)
    steps = np.arange(t)
    rev_sum = zc[:, 53 + steps - 5] - zc[:, 53 + steps - 53]
    z_lag = np.concatenate([np.zeros((n, 1)), z[:, :-1]], axis=1)

    effect = (
        cfg.pressure_w1_bps * z_lag
        + cfg.pressure_mktcap_bps * z_cap[:, None] * z_lag
        + cfg.pressure_reversal_bps / 48.0 * rev_sum
    ) / 1e4
    abn = effect + abn_eps
    ret = np.maximum(market_factor[None, :] + abn, -0.9)

    # turnover answers last week's (log) search volume
    log_svi = np.log(svi.astype(float))
    log_svi_dev = log_svi - log_svi.mean(axis=1, keepdims=True)
    u = np.zeros((n, t))
    u[:, 0] = turn_eps[:, 0]
    for s in range(1, t):
        u[:, s] = (
            cfg.turnover_ar * u[:, s - 1]
            + cfg.svi_to_turnover * log_svi_dev[:, s - 1]
            + turn_eps[:, s]
        )
    turnover = turnover_base[:, None] * np.exp(u)
    cap = np.exp(log_cap)

    svi_records = []
    name_records = []
    prod_records = []
    market_records = []
    for i, tick in enumerate(tickers):
        for s, week in enumerate(weeks):
            svi_records.append(SviObservation(tick, KeywordKind.TICKER, week, int(svi[i, s])))
            name_records.append(SviObservation(tick, KeywordKind.NAME, week, int(name_svi[i, s])))
            prod_records.append(SviObservation(tick, KeywordKind.PRODUCT, week, int(prod_svi[i, s])))
            market_records.append(
                WeeklyMarketRow(
                    ticker=tick,
                    week=week,
                    ret=float(ret[i, s]),
                    turnover=float(turnover[i, s]),
                    market_cap=float(cap[i]),
                    news_count=int(news[i, s]),
                    benchmark_ret=float(market_factor[s]),
                )
            )

    # monthly retail order files; volume follows monthly search totals
    month_of_week = np.array([Month(w.week_start.year, w.week_start.month).index for w in weeks])
    month_indices = sorted(set(month_of_week.tolist()))
    svi_monthly = np.zeros((n, len(month_indices)))
    for pos, midx in enumerate(month_indices):
        svi_monthly[:, pos] = svi[:, month_of_week == midx].sum(axis=1)
    log_s = np.log(svi_monthly)
    log_s_dev = log_s - log_s.mean(axis=1, keepdims=True)
    retail_eps = rng.standard_normal(log_s.shape) * cfg.retail_noise
    total_eps = rng.standard_normal(log_s.shape) * 0.05
    order_eps = rng.standard_normal((n, len(month_indices), 4)) * 0.03

    dash5_records: list[Dash5Record] = []
    totals: dict[tuple[str, Month], int] = {}
    buckets = list(Bucket)
    for i, tick in enumerate(tickers):
        for pos, midx in enumerate(month_indices):
            month = Month.from_index(midx)
            total_shares = int(round(total_vol_base[i] * math.exp(total_eps[i, pos])))
            group_shares = dash5_frac[i] * total_vol_base[i] * math.exp(
                cfg.retail_elasticity * log_s_dev[i, pos] + retail_eps[i, pos]
            )
            totals[(tick, month)] = total_shares
            for b_pos, bucket in enumerate(buckets):
                shares = int(round(BUCKET_SHARE_WEIGHTS[bucket] * group_shares))
                orders = int(
                    round(
                        shares
                        / BUCKET_ORDER_SIZES[bucket]
                        * math.exp(order_eps[i, pos, b_pos])
                    )
                )
                dash5_records.append(
                    Dash5Record(
                        ticker=tick,
                        month=month,
                        bucket=bucket,
                        orders=orders,
                        shares=shares,
                    )
                )

    ipo_records: list[IpoRecord] = []
    ipo_name_records: list[SviObservation] = []
    ipo_market_records: list[WeeklyMarketRow] = []
    measured_day1_gap = float("nan")
    if cfg.ipo_count > 0:
        (
            ipo_records,
            ipo_name_records,
            ipo_market_records,
            measured_day1_gap,
        ) = _generate_ipos(cfg, rng, weeks, market_factor)

    n_noise = int(round(cfg.noise_ticker_rate * n))
    noise = NoiseTickerList(tickers[:n_noise]) if n_noise else None

    inputs = StudyInputs(
        svi=svi_records,
        market=market_records + ipo_market_records,
        svi_name=name_records + ipo_name_records,
        svi_product=prod_records,
        dash5=dash5_records,
        dash5_totals=totals,
        ipo=ipo_records,
        noise=noise,
    )
    truth = {
        "seed": float(cfg.seed),
        "n_tickers": float(n),
        "n_weeks": float(t),
        "pressure_w1_bps": cfg.pressure_w1_bps,
        "pressure_reversal_bps": cfg.pressure_reversal_bps,
        "pressure_mktcap_bps": cfg.pressure_mktcap_bps,
        "retail_elasticity": cfg.retail_elasticity,
        "svi_to_turnover": cfg.svi_to_turnover,
        "name_svi_corr": cfg.name_svi_corr,
        "ipo_count": float(cfg.ipo_count),
        "ipo_spike": cfg.ipo_spike,
        "ipo_day1_group_effect": cfg.ipo_day1_group_effect,
        "ipo_reversal_5_52": cfg.ipo_reversal_5_52,
        "measured_ipo_day1_gap": measured_day1_gap,
        "noise_ticker_fraction": (n_noise / n) if n_noise else 0.0,
        "svi_clip_rate": svi_clip,
        "name_svi_clip_rate": name_clip,
        "product_svi_clip_rate": prod_clip,
    }
    return SynthData(inputs=inputs, truth=truth)


def _generate_ipos(
    cfg: DgpConfig,
    rng: np.random.Generator,
    weeks: list[WeekStamp],
    market_factor: np.ndarray,
) -> tuple[list[IpoRecord], list[SviObservation], list[WeeklyMarketRow], float]:
    t = len(weeks)
    m = cfg.ipo_count
    listing_pos = rng.integers(24, t - 52, m)
    eta = rng.normal(0.0, cfg.ipo_attention_scale, m)
    demand = rng.standard_normal(m)
    mid = rng.uniform(12.0, 24.0, m)
    gap_days = rng.integers(49, 91, m)
    svi_eps = rng.standard_normal((m, 25)) * 0.06
    news_draw = rng.random((m, 16))
    day1_eps = rng.standard_normal(m) * cfg.ipo_day1_noise
    offering = np.exp(rng.normal(18.0, 0.7, m))
    assets = np.exp(rng.normal(19.0, 0.9, m))
    industry = rng.normal(0.02, 0.06, m)
    post_eps = rng.standard_normal((m, 52)) * cfg.ipo_post_noise

    records: list[IpoRecord] = []
    name_obs: list[SviObservation] = []
    market_rows: list[WeeklyMarketRow] = []
    day1_high = []
    day1_low = []
    ipo_base = 25.0
    for j in range(m):
        pos = int(listing_pos[j])
        w0 = weeks[pos]
        ticker = _ipo_ticker(j)
        listing_date = w0.week_start + dt.timedelta(days=2)
        filing_date = listing_date - dt.timedelta(days=int(gap_days[j]))
        pr = float(np.clip(1.0 + 0.15 * demand[j], 0.65, 1.4))
        offer = round(float(mid[j]) * pr, 2)
        lo = round(float(mid[j]) - 1.0, 2)
        hi = round(float(mid[j]) + 1.0, 2)

        # attention shape: flat, a small leak the week before pricing,
        # the listing spike, then geometric decay
        for k, e in enumerate(range(-16, 9)):
            shape = 0.0
            if e == -2:
                shape = 0.4
            elif e == -1:
                shape = 1.0
            elif e == 0:
                shape = 1.0
            elif e > 0:
                shape = 0.85**e
            level = ipo_base * math.exp(
                eta[j] * shape + (cfg.ipo_spike if e == 0 else 0.0) + svi_eps[j, k]
            )
            value = int(np.clip(round(level), 1, 100))
            name_obs.append(SviObservation(ticker, KeywordKind.NAME, w0.add(e), value))

        # pre-listing placeholder weeks only carry the news counts
        news_weeks = media_weeks = None
        first_week = week_of(filing_date)
        n_pre = w0.index - first_week.index
        lam = 1.5 * math.exp(0.4 * eta[j])
        for p in range(n_pre):
            week = first_week.add(p)
            count = int(np.round(lam * (0.5 + news_draw[j, p % 16])))
            market_rows.append(
                WeeklyMarketRow(
                    ticker=ticker,
                    week=week,
                    ret=0.0,
                    turnover=0.0,
                    market_cap=float(offering[j]),
                    news_count=max(count, 0),
                    benchmark_ret=0.0,
                )
            )

        high = eta[j] > 0
        day1 = (
            cfg.ipo_day1_base
            + (cfg.ipo_day1_group_effect if high else 0.0)
            + cfg.ipo_day1_asvi_loading * eta[j]
            + cfg.ipo_price_revision_loading * (pr - 1.0)
            + float(day1_eps[j])
        )
        market_rows.append(
            WeeklyMarketRow(
                ticker=ticker,
                week=w0,
                ret=float(day1),
                turnover=0.08,
                market_cap=float(offering[j] * 4.0),
                news_count=4,
                benchmark_ret=0.0,
            )
        )
        drift = cfg.ipo_reversal_5_52 / 48.0 if high else 0.0
        for step in range(1, 53):
            wk_pos = pos + step
            bench = float(market_factor[wk_pos]) if wk_pos < t else 0.0
            r = bench + (drift if 5 <= step <= 52 else 0.0) + float(post_eps[j, step - 1])
            market_rows.append(
                WeeklyMarketRow(
                    ticker=ticker,
                    week=w0.add(step),
                    ret=max(r, -0.9),
                    turnover=0.05,
                    market_cap=float(offering[j] * 4.0),
                    news_count=1,
                    benchmark_ret=bench,
                )
            )
        records.append(
            IpoRecord(
                name=f"Issuer {ticker}",
                ticker=ticker,
                filing_date=filing_date,
                listing_date=listing_date,
                range_low=lo,
                range_high=hi,
                offer_price=offer,
                offering_size=float(offering[j]),
                asset_size=float(assets[j]),
                industry_return=float(industry[j]),
                security_type=SecurityType.COMMON,
                first_trade_day_offset=1,
            )
        )
        (day1_high if high else day1_low).append(day1)
    if day1_high and day1_low:
        gap = float(np.mean(day1_high) - np.mean(day1_low))
    else:
        gap = float("nan")
    return records, name_obs, market_rows, gap


TRUTH_FILE = "truth.txt"


def write_dataset(data: SynthData, out_dir: str | Path, *, comment: str | None = None) -> None:
    """Write the CSV bundle plus truth.txt into a directory."""
    root = Path(out_dir)
    root.mkdir(parents=True, exist_ok=True)
    ticker_obs = [o for o in data.inputs.svi]
    write_svi_csv(ticker_obs, root / "svi.csv", comment=comment)
    write_svi_csv(data.inputs.svi_name, root / "svi_name.csv", comment=comment)
    write_svi_csv(data.inputs.svi_product, root / "svi_product.csv", comment=comment)
    write_market_csv(data.inputs.market, root / "market.csv", comment=comment)
    if data.inputs.dash5:
        write_dash5_csv(
            data.inputs.dash5, data.inputs.dash5_totals, root / "dash5.csv", comment=comment
        )
    if data.inputs.ipo:
        write_ipo_csv(data.inputs.ipo, root / "ipo.csv", comment=comment)
    if data.inputs.noise is not None and len(data.inputs.noise):
        write_noise_tickers(data.inputs.noise, root / "noise_tickers.txt", comment=comment)
    with open(root / TRUTH_FILE, "w", encoding="utf-8") as fh:
        if comment:
            fh.write(f"# {comment}\n")
        for key in sorted(data.truth):
            fh.write(f"{key} = {repr(float(data.truth[key]))}\n")


def read_truth(path: str | Path) -> dict[str, float]:
    out: dict[str, float] = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition("=")
        out[key.strip()] = float(value.strip())
    return out


def generate_var_panel(
    n_tickers: int,
    n_weeks: int,
    *,
    cross_lag: float,
    seed: int = 0,
    diag: Sequence[float] = (0.5, 0.4, 0.3, 0.3),
    noise: float = 1.0,
) -> tuple[dict[str, np.ndarray], np.ndarray]:
    """Multi-ticker VAR(1) draws with one planted cross-lag coefficient.

    ``cross_lag`` is placed at row 1, column 0 of the transition matrix
    (series 0 leading series 1). Returns the panels and the matrix.
    """
    k = len(diag)
    a = np.diag(np.asarray(diag, dtype=float))
    a[1, 0] = cross_lag
    rng = np.random.default_rng(seed)
    panels: dict[str, np.ndarray] = {}
    for i in range(n_tickers):
        shocks = rng.standard_normal((n_weeks, k)) * noise
        series = np.empty((n_weeks, k))
        series[0] = shocks[0]
        for s in range(1, n_weeks):
            series[s] = a @ series[s - 1] + shocks[s]
        panels[_ticker_name(i)] = series
    return panels, a


# --- naive reference estimators --------------------------------------------
#
# These recompute the statistics with plain loops, explicit normal
# equations, and hand-rolled elimination so they share no code path with
# the production estimators they check.


def _solve_gauss(a: list[list[float]], b: list[float]) -> list[float]:
    k = len(b)
    m = [row[:] + [b[i]] for i, row in enumerate(a)]
    for col in range(k):
        pivot = max(range(col, k), key=lambda r: abs(m[r][col]))
        if abs(m[pivot][col]) < 1e-12:
            raise np.linalg.LinAlgError("singular system")
        m[col], m[pivot] = m[pivot], m[col]
        for r in range(k):
            if r == col:
                continue
            factor = m[r][col] / m[col][col]
            for c in range(col, k + 1):
                m[r][c] -= factor * m[col][c]
    return [m[i][k] / m[i][i] for i in range(k)]


def _inverse_gauss(a: list[list[float]]) -> list[list[float]]:
    k = len(a)
    cols = []
    for j in range(k):
        e = [1.0 if i == j else 0.0 for i in range(k)]
        cols.append(_solve_gauss(a, e))
    return [[cols[j][i] for j in range(k)] for i in range(k)]


def oracle_ols(
    y: Sequence[float], x_cols: Sequence[Sequence[float]], *, intercept: bool = True
) -> dict[str, list[float] | float]:
    """Looped normal-equations OLS with classical and HC1 errors."""
    yv = [float(v) for v in y]
    n = len(yv)
    cols = [[float(v) for v in col] for col in x_cols]
    if intercept:
        cols = cols + [[1.0] * n]
    k = len(cols)
    xtx = [[sum(cols[i][r] * cols[j][r] for r in range(n)) for j in range(k)] for i in range(k)]
    xty = [sum(cols[i][r] * yv[r] for r in range(n)) for i in range(k)]
    beta = _solve_gauss(xtx, xty)
    resid = [yv[r] - sum(beta[j] * cols[j][r] for j in range(k)) for r in range(n)]
    ssr = sum(e * e for e in resid)
    sigma2 = ssr / (n - k)
    inv = _inverse_gauss(xtx)
    se_classical = [math.sqrt(sigma2 * inv[i][i]) for i in range(k)]
    meat = [
        [sum(cols[i][r] * cols[j][r] * resid[r] * resid[r] for r in range(n)) for j in range(k)]
        for i in range(k)
    ]
    sandwich = [
        [
            sum(inv[i][a_] * meat[a_][b_] * inv[b_][j] for a_ in range(k) for b_ in range(k))
            for j in range(k)
        ]
        for i in range(k)
    ]
    scale = n / (n - k)
    se_hc1 = [math.sqrt(scale * sandwich[i][i]) for i in range(k)]
    if intercept:
        ybar = sum(yv) / n
        sst = sum((v - ybar) ** 2 for v in yv)
    else:
        sst = sum(v * v for v in yv)
    r2 = 1.0 - ssr / sst if sst > 0 else 0.0
    return {
        "coef": beta,
        "se_classical": se_classical,
        "se_hc1": se_hc1,
        "r2": max(0.0, min(1.0, r2)),
        "resid": resid,
    }


def oracle_nw_se_of_mean(series: Sequence[float], lags: int) -> float:
    """Bartlett-kernel long-run standard error of a sample mean, looped."""
    vals = [float(v) for v in series]
    t = len(vals)
    mean = sum(vals) / t
    dev = [v - mean for v in vals]
    total = sum(d * d for d in dev) / t
    for lag in range(1, lags + 1):
        gamma = sum(dev[s] * dev[s - lag] for s in range(lag, t)) / t
        total += 2.0 * (1.0 - lag / (lags + 1.0)) * gamma
    total = max(total, 0.0)
    return math.sqrt(total / t)


def oracle_corr(x: Sequence[float], y: Sequence[float]) -> float:
    """Pairwise-complete Pearson correlation with explicit sums."""
    pairs = [
        (float(a), float(b))
        for a, b in zip(x, y)
        if not (math.isnan(float(a)) or math.isnan(float(b)))
    ]
    n = len(pairs)
    mx = sum(a for a, _ in pairs) / n
    my = sum(b for _, b in pairs) / n
    sxy = sum((a - mx) * (b - my) for a, b in pairs)
    sxx = sum((a - mx) ** 2 for a, _ in pairs)
    syy = sum((b - my) ** 2 for _, b in pairs)
    if sxx <= 0 or syy <= 0:
        return float("nan")
    return sxy / math.sqrt(sxx * syy)


def oracle_welch_p(t_stat: float, df: float) -> float:
    """Two-sided p-value by numeric integration of the Student density."""
    from scipy.integrate import quad

    if math.isinf(t_stat):
        return 0.0

    log_norm = math.lgamma((df + 1) / 2) - math.lgamma(df / 2) - 0.5 * math.log(df * math.pi)

    def density(u: float) -> float:
        return math.exp(log_norm - (df + 1) / 2 * math.log1p(u * u / df))

    tail, _ = quad(density, abs(t_stat), np.inf)
    return min(1.0, 2.0 * tail)


def oracle_fmb(
    panel,
    dependent: str,
    regressors: Sequence[str],
    *,
    week_col: str = "widx",
    nw_lags: int = 4,
) -> dict[str, list[float] | float | int]:
    """Week-by-week looped re-estimation of the two-pass procedure."""
    names = list(regressors)
    k = len(names)
    weekly: list[list[float]] = []
    r2s: list[float] = []
    skipped = 0
    for _, grp in sorted(panel.groupby(week_col), key=lambda p: p[0]):
        rows = grp[[dependent] + names].dropna()
        if len(rows) < max(k + 2, 3):
            skipped += 1
            continue
        z_cols = []
        degenerate = False
        for name in names:
            col = [float(v) for v in rows[name]]
            m = sum(col) / len(col)
            var = sum((v - m) ** 2 for v in col) / (len(col) - 1)
            if var <= 0:
                degenerate = True
                break
            sd = math.sqrt(var)
            z_cols.append([(v - m) / sd for v in col])
        if degenerate:
            skipped += 1
            continue
        try:
            fit = oracle_ols([float(v) for v in rows[dependent]], z_cols)
        except np.linalg.LinAlgError:
            skipped += 1
            continue
        weekly.append(list(fit["coef"]))
        r2s.append(float(fit["r2"]))
    t = len(weekly)
    mean_coef = [sum(w[j] for w in weekly) / t for j in range(k + 1)]
    nw_se = [oracle_nw_se_of_mean([w[j] for w in weekly], nw_lags) for j in range(k + 1)]
    return {
        "mean_coef": mean_coef,
        "nw_se": nw_se,
        "r2": sum(r2s) / t,
        "n_weeks": t,
        "skipped": skipped,
    }
