"""Estimators: OLS with robust errors, Newey-West, Fama-MacBeth, per-ticker
VAR(1) with cross-ticker averaging, the moving-block bootstrap, pairwise
correlations, and the Welch two-sample test.

Everything here is deliberately plain numpy so each routine can be checked
against the naive oracles in :mod:`svipanel.synth`.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
import pandas as pd
from scipy import stats

from .attention import Horizon, cross_sectional_standardize, forward_column
from .datamodel import FmbResult, RegressionResult, Var1Fit, VarResult
from .errors import (
    DegenerateCrossSection,
    EmptyInput,
    InsufficientOverlap,
    InvalidConfig,
    RankDeficient,
    RepsTooSmall,
    TooFewObservations,
    TooFewWeeks,
)

NW_LAGS_DEFAULT = 4
VAR_MIN_OBS = 104
CORR_MIN_OVERLAP = 8


def _as_matrix(X) -> np.ndarray:
    arr = np.asarray(X, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    return arr


def ols(
    y,
    X,
    *,
    names: Sequence[str] | None = None,
    intercept: bool = True,
    cov: str = "hc1",
) -> RegressionResult:
    """Least squares with classical and HC1 standard errors.

    Parameters
    ----------
    y : (n,) response
    X : (n, k) regressors, or (n,) for a single one
    names : labels for the columns of X; the intercept is appended as "const"
    intercept : augment X with a constant column (R^2 is then centered;
        without it the uncentered convention applies)
    cov : which standard errors drive t and p, "hc1" or "classical";
        both flavors are stored either way

    Raises
    ------
    TooFewObservations : n does not exceed the column count
    RankDeficient : the augmented design is not of full column rank
    """
    yv = np.asarray(y, dtype=float).ravel()
    Xm = _as_matrix(X)
    n, k0 = Xm.shape
    if yv.shape[0] != n:
        raise ValueError("y and X disagree on the number of rows")
    if not (np.isfinite(yv).all() and np.isfinite(Xm).all()):
        raise ValueError("ols requires finite inputs; drop missing rows first")
    if names is None:
        names = tuple(f"x{i + 1}" for i in range(k0))
    else:
        names = tuple(names)
        if len(names) != k0:
            raise ValueError("names length does not match X")
    if intercept:
        Xm = np.column_stack([Xm, np.ones(n)])
        names = names + ("const",)
    k = Xm.shape[1]
    if n <= k:
        raise TooFewObservations(f"n={n} observations for k={k} parameters")

    coef, _, rank, _ = np.linalg.lstsq(Xm, yv, rcond=None)
    if rank < k:
        raise RankDeficient(f"rank {rank} < {k} columns")

    resid = yv - Xm @ coef
    dof = n - k
    xtx_inv = np.linalg.inv(Xm.T @ Xm)
    sigma2 = float(resid @ resid) / dof
    se_classical = np.sqrt(np.clip(sigma2 * np.diag(xtx_inv), 0.0, None))
    meat = (Xm * (resid**2)[:, None]).T @ Xm
    cov_hc1 = xtx_inv @ meat @ xtx_inv * (n / dof)
    se_hc1 = np.sqrt(np.clip(np.diag(cov_hc1), 0.0, None))

    if intercept:
        sst = float(((yv - yv.mean()) ** 2).sum())
    else:
        sst = float((yv**2).sum())
    ssr = float(resid @ resid)
    r2 = 0.0 if sst <= 0.0 else max(0.0, min(1.0, 1.0 - ssr / sst))

    se = se_hc1 if cov == "hc1" else se_classical
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(se > 0, coef / np.where(se > 0, se, 1.0), np.where(coef == 0, 0.0, np.inf * np.sign(coef)))
    p = 2.0 * stats.t.sf(np.abs(t), dof)
    return RegressionResult(
        names=names,
        coef=coef,
        se=se,
        t=t,
        p=p,
        r2=r2,
        n=n,
        method=f"ols-{cov}",
        se_classical=se_classical,
        se_hc1=se_hc1,
    )


def newey_west_se_of_mean(series, lags: int = NW_LAGS_DEFAULT) -> float:
    """Autocorrelation-robust standard error of a sample mean.

    Bartlett weights over ``lags`` autocovariances, each computed with the
    full-sample divisor; ``lags=0`` collapses to the iid formula
    sqrt(population variance / T).
    """
    if lags < 0:
        raise ValueError(f"lags must be >= 0, got {lags}")
    x = np.asarray(series, dtype=float).ravel()
    T = x.size
    if T <= lags:
        raise TooFewObservations(f"T={T} must exceed lags={lags}")
    d = x - x.mean()
    s = float(d @ d) / T
    for j in range(1, lags + 1):
        gamma_j = float(d[j:] @ d[:-j]) / T
        s += 2.0 * (1.0 - j / (lags + 1.0)) * gamma_j
    s = max(s, 0.0)
    return math.sqrt(s / T)


def fama_macbeth(
    panel: pd.DataFrame,
    horizon: Horizon,
    regressors: Sequence[str],
    nw_lags: int = NW_LAGS_DEFAULT,
    *,
    dependent: str | None = None,
    week_col: str = "widx",
    standardize: bool = True,
    min_weeks: int = 10,
) -> FmbResult:
    """Two-pass cross-sectional regression of forward returns on attention.

    Each week, the regressors are standardized over the week's complete
    cases and the forward bps return is regressed on them plus an
    intercept; the second pass averages the weekly coefficient vectors
    and attaches Newey-West standard errors of those means. Weeks whose
    cross-section is too small, constant, or rank deficient are skipped
    and counted.

    Parameters
    ----------
    panel : long ticker-week frame holding ``week_col``, the dependent
        column, and every regressor
    horizon : which forward window the dependent covers; picks the
        default dependent column name
    regressors : panel columns entering every weekly regression
    nw_lags : Bartlett lag count for the second-pass standard errors
    dependent : override for the dependent column name
    standardize : z-score regressors within each week (the default);
        disable to regress on raw values
    min_weeks : minimum number of valid weekly cross-sections

    Returns
    -------
    FmbResult with one row per regressor plus "const".
    """
    dep = dependent if dependent is not None else forward_column(horizon)
    regressors = list(regressors)
    k = len(regressors)
    if k == 0:
        raise InvalidConfig("at least one regressor is required")
    cols = [dep] + regressors
    weekly: list[np.ndarray] = []
    weeks: list[int] = []
    r2s: list[float] = []
    skipped = 0
    for widx, grp in panel.groupby(week_col, sort=True):
        block = grp[cols].to_numpy(dtype=float)
        keep = np.isfinite(block).all(axis=1)
        block = block[keep]
        # n > k + 1 for the intercept-augmented fit, >= 3 for z-scores
        if block.shape[0] < max(k + 2, 3):
            skipped += 1
            continue
        yw = block[:, 0]
        Xw = block[:, 1:]
        try:
            if standardize:
                Xw = np.column_stack(
                    [cross_sectional_standardize(Xw[:, j]) for j in range(k)]
                )
            fit = ols(yw, Xw, names=regressors, intercept=True, cov="classical")
        except (DegenerateCrossSection, RankDeficient, TooFewObservations):
            skipped += 1
            continue
        weekly.append(fit.coef)
        weeks.append(int(widx))
        r2s.append(fit.r2)
    T = len(weekly)
    if T < max(min_weeks, 1):
        raise TooFewWeeks(f"{T} valid weeks < {min_weeks} ({skipped} skipped)")
    weekly_arr = np.vstack(weekly)
    mean_coef = weekly_arr.mean(axis=0)
    # a coefficient series of T weeks supports at most T-1 lags
    lags_used = min(nw_lags, T - 1)
    nw_se = np.array(
        [newey_west_se_of_mean(weekly_arr[:, j], lags_used) for j in range(k + 1)]
    )
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(
            nw_se > 0,
            mean_coef / np.where(nw_se > 0, nw_se, 1.0),
            np.where(mean_coef == 0, 0.0, np.inf * np.sign(mean_coef)),
        )
    df = max(T - 1, 1)
    p = 2.0 * stats.t.sf(np.abs(t), df)
    return FmbResult(
        horizon=horizon,
        names=tuple(regressors) + ("const",),
        weekly_coefs=weekly_arr,
        weeks=tuple(weeks),
        mean_coef=mean_coef,
        nw_se=nw_se,
        t=t,
        p=p,
        r2=float(np.mean(r2s)),
        n_weeks=T,
        skipped_weeks=skipped,
        nw_lags=nw_lags,
    )


def var1(
    data,
    *,
    names: Sequence[str] | None = None,
    min_obs: int = VAR_MIN_OBS,
) -> Var1Fit:
    """First-order VAR for one ticker: k regressions on all k lagged series.

    ``data`` is a (T, k) array in week order; rows containing missing
    values are allowed, but only pairs of consecutive complete rows enter
    the fit, and at least ``min_obs`` complete rows are required.
    """
    A = np.asarray(data, dtype=float)
    if A.ndim != 2:
        raise ValueError("var1 expects a (T, k) array")
    T, k = A.shape
    if names is None:
        names = tuple(f"s{i + 1}" for i in range(k))
    else:
        names = tuple(names)
    complete = np.isfinite(A).all(axis=1)
    if int(complete.sum()) < min_obs:
        raise TooFewObservations(
            f"{int(complete.sum())} complete rows < {min_obs}"
        )
    pair = complete[1:] & complete[:-1]
    idx = np.nonzero(pair)[0] + 1
    if idx.size <= k + 1:
        raise TooFewObservations(f"{idx.size} usable lag pairs for k={k}")
    Y = A[idx]
    X = np.column_stack([A[idx - 1], np.ones(idx.size)])
    B, _, rank, _ = np.linalg.lstsq(X, Y, rcond=None)
    if rank < k + 1:
        raise RankDeficient(f"lagged design rank {rank} < {k + 1}")
    resid = Y - X @ B
    sst = ((Y - Y.mean(axis=0)) ** 2).sum(axis=0)
    ssr = (resid**2).sum(axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        r2 = np.where(sst > 0, 1.0 - ssr / np.where(sst > 0, sst, 1.0), 0.0)
    return Var1Fit(
        names=names,
        coef=B[:k].T.copy(),
        intercept=B[k].copy(),
        r2=np.clip(r2, 0.0, 1.0),
        nobs=int(idx.size),
    )


def var_aggregate(fits: Mapping[str, Var1Fit]) -> VarResult:
    """Cell-wise mean of per-ticker VAR(1) coefficient matrices and R^2."""
    if not fits:
        raise EmptyInput("no VAR fits to aggregate")
    tickers = sorted(fits)
    names = fits[tickers[0]].names
    coefs = np.stack([fits[t].coef for t in tickers])
    r2s = np.stack([fits[t].r2 for t in tickers])
    return VarResult(
        names=names,
        per_ticker=dict(fits),
        avg_coef=coefs.mean(axis=0),
        avg_r2=r2s.mean(axis=0),
        boot_p=None,
        n_tickers=len(tickers),
    )


@dataclass(frozen=True)
class BootstrapConfig:
    """Moving-block bootstrap settings; replicate r draws from seed ^ r."""

    block_len: int = 23
    reps: int = 1000
    seed: int = 0

    def __post_init__(self) -> None:
        if self.reps < 100:
            raise RepsTooSmall(f"reps={self.reps} < 100")
        if self.block_len < 1:
            raise InvalidConfig(f"block_len={self.block_len} < 1")
        if self.seed < 0:
            raise InvalidConfig("seed must be non-negative")


def _block_indices(rng: np.random.Generator, T: int, block_len: int) -> np.ndarray:
    L = min(block_len, T)
    n_blocks = -(-T // L)
    starts = rng.integers(0, T - L + 1, size=n_blocks)
    idx = (starts[:, None] + np.arange(L)[None, :]).ravel()
    return idx[:T]


def block_bootstrap_pvalue(
    panels: Mapping[str, np.ndarray],
    cfg: BootstrapConfig,
    *,
    min_obs: int = VAR_MIN_OBS,
    n_threads: int = 1,
) -> np.ndarray:
    """Null-centered bootstrap p-values for the averaged VAR(1) matrix.

    Each replicate resamples every ticker's multivariate series with
    overlapping blocks (concatenated to the original length, tail
    truncated), refits the per-ticker VARs, and averages; replicate
    statistics are centered on the full-sample average and the p-value
    per cell is the fraction with |centered| >= |full-sample|. The
    replicate-level seeding makes the result identical for any
    ``n_threads``.
    """
    tickers = sorted(panels)
    if not tickers:
        raise EmptyInput("no ticker series supplied")
    arrays = {t: np.asarray(panels[t], dtype=float) for t in tickers}
    fits = {t: var1(arrays[t], min_obs=min_obs) for t in tickers}
    full = var_aggregate(fits).avg_coef
    k = full.shape[0]

    def one_rep(r: int) -> np.ndarray:
        rng = np.random.default_rng(cfg.seed ^ r)
        acc = np.zeros((k, k))
        count = 0
        for t in tickers:
            A = arrays[t]
            idx = _block_indices(rng, A.shape[0], cfg.block_len)
            try:
                fit = var1(A[idx], min_obs=min_obs)
            except (RankDeficient, TooFewObservations):
                continue
            acc += fit.coef
            count += 1
        if count == 0:
            return np.full((k, k), np.nan)
        return acc / count - full

    if n_threads <= 1:
        centered = [one_rep(r) for r in range(cfg.reps)]
    else:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            centered = list(pool.map(one_rep, range(cfg.reps)))
    stack = np.stack(centered)
    valid = np.isfinite(stack).all(axis=(1, 2))
    if not valid.any():
        raise EmptyInput("every bootstrap replicate failed")
    exceed = (np.abs(stack[valid]) >= np.abs(full)[None, :, :]).mean(axis=0)
    return exceed


def corr_matrix(
    data,
    *,
    names: Sequence[str] | None = None,
    min_overlap: int = CORR_MIN_OVERLAP,
) -> np.ndarray:
    """Pairwise-complete Pearson correlations.

    Every pair must overlap on at least ``min_overlap`` rows; the
    diagonal is exactly 1. A pair that is constant over its overlap
    yields NaN.
    """
    if isinstance(data, pd.DataFrame):
        if names is None:
            names = tuple(map(str, data.columns))
        data = data.to_numpy(dtype=float)
    A = np.asarray(data, dtype=float)
    if A.ndim != 2:
        raise ValueError("corr_matrix expects a (T, k) array")
    T, k = A.shape
    if names is None:
        names = tuple(f"v{i + 1}" for i in range(k))
    finite = np.isfinite(A)
    out = np.eye(k)
    for i in range(k):
        for j in range(i + 1, k):
            mask = finite[:, i] & finite[:, j]
            n = int(mask.sum())
            if n < min_overlap:
                raise InsufficientOverlap(
                    f"{names[i]} vs {names[j]}: overlap {n} < {min_overlap}"
                )
            xi = A[mask, i]
            xj = A[mask, j]
            xi = xi - xi.mean()
            xj = xj - xj.mean()
            denom = math.sqrt(float(xi @ xi) * float(xj @ xj))
            value = float(xi @ xj) / denom if denom > 0 else np.nan
            out[i, j] = out[j, i] = value
    return out


@dataclass(frozen=True)
class WelchResult:
    t: float
    p: float
    mean_diff: float
    df: float


def welch_t_test(a, b) -> WelchResult:
    """Two-sided Welch test for a difference in means, unequal variances.

    Uses the Welch-Satterthwaite degrees of freedom. Identical samples
    give t = 0, p = 1; zero pooled dispersion with distinct means gives
    an infinite statistic and p = 0.
    """
    xa = np.asarray(a, dtype=float).ravel()
    xb = np.asarray(b, dtype=float).ravel()
    na, nb = xa.size, xb.size
    if na < 2 or nb < 2:
        raise TooFewObservations("welch test needs >= 2 observations per group")
    va = float(xa.var(ddof=1))
    vb = float(xb.var(ddof=1))
    diff = float(xa.mean() - xb.mean())
    se2 = va / na + vb / nb
    if se2 == 0.0:
        if diff == 0.0:
            return WelchResult(t=0.0, p=1.0, mean_diff=0.0, df=float(na + nb - 2))
        return WelchResult(
            t=math.copysign(math.inf, diff), p=0.0, mean_diff=diff,
            df=float(na + nb - 2),
        )
    t = diff / math.sqrt(se2)
    df = se2**2 / ((va / na) ** 2 / (na - 1) + (vb / nb) ** 2 / (nb - 1))
    p = 2.0 * float(stats.t.sf(abs(t), df))
    return WelchResult(t=t, p=p, mean_diff=diff, df=df)
