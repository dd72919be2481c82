"""Command-line front end.

Every study writes its canonical CSV (or text) into an output directory,
with a leading "# config:" line so a result can be traced back to the
exact run settings. Flags beat config-file entries, which beat defaults.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

from .econ import BootstrapConfig
from .errors import InvalidConfig, SvipanelError
from .studies import (
    StudyInputs,
    load_inputs,
    resolve_period,
    run_correlation_study,
    run_ipo_cross_section,
    run_ipo_event_study,
    run_price_pressure_study,
    run_retail_study,
    run_var_leadlag_study,
    study_panel,
)
from .synth import DgpConfig, SynthData, generate, write_dataset
from .tables import StudyTable, render_csv, render_text

DEFAULTS = {
    "period": "all",
    "format": "csv",
    "seed": 0,
    "reps": 1000,
    "block_len": 23,
    "nw_lags": 4,
    "threads": 1,
    "min_obs": 104,
    "size_group": "100-1999",
    "delta": "log",
    "estimator": "pooled",
    "window": 8,
    "min_group": 10,
    "drop_noise": False,
}


@dataclass
class RunConfig:
    """Fully resolved options for one CLI invocation."""

    data: str = "."
    out: str = "."
    period: str = "all"
    format: str = "csv"
    seed: int = 0
    reps: int = 1000
    block_len: int = 23
    nw_lags: int = 4
    threads: int = 1
    min_obs: int = 104
    size_group: str = "100-1999"
    delta: str = "log"
    estimator: str = "pooled"
    window: int = 8
    min_group: int = 10
    drop_noise: bool = False

    def config_line(self, command: str) -> str:
        # threads deliberately left out: the same run must produce the
        # same bytes at any thread count
        parts = [
            f"command={command}",
            f"period={self.period}",
            f"seed={self.seed}",
            f"reps={self.reps}",
            f"block_len={self.block_len}",
            f"nw_lags={self.nw_lags}",
        ]
        return "config: " + " ".join(parts)


def read_config_file(path: str | Path) -> dict[str, str]:
    """Flat "key = value" file; blank lines and # comments ignored."""
    out: dict[str, str] = {}
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise InvalidConfig(f"config line {raw!r} is not key = value")
        key, _, value = line.partition("=")
        out[key.strip()] = value.strip()
    return out


def _coerce(value: str, like) -> object:
    if isinstance(like, bool):
        low = value.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise InvalidConfig(f"expected a boolean, got {value!r}")
    if isinstance(like, int):
        return int(value)
    if isinstance(like, float):
        return float(value)
    return value


def resolve_config(ns: argparse.Namespace) -> RunConfig:
    file_values: dict[str, str] = {}
    if getattr(ns, "config", None):
        file_values = read_config_file(ns.config)
    cfg = RunConfig()
    cfg.data = getattr(ns, "data", ".") or "."
    cfg.out = getattr(ns, "out", ".") or "."
    for key, default in DEFAULTS.items():
        flag = getattr(ns, key, None)
        if flag is not None:
            value = flag
        elif key in file_values:
            value = _coerce(file_values[key], default)
        else:
            value = default
        setattr(cfg, key, value)
    unknown = set(file_values) - set(DEFAULTS)
    if unknown:
        raise InvalidConfig(f"unknown config keys: {sorted(unknown)}")
    return cfg


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="svipanel",
        description="attention panels: build, study, and simulate",
    )
    sub = parser.add_subparsers(dest="command")

    def add_common(p: argparse.ArgumentParser, *, bootstrap: bool = False) -> None:
        p.add_argument("--data", required=True, help="dataset directory")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--config", help="key = value settings file")
        p.add_argument("--period", help="week range label, e.g. 2004-2008 or all")
        p.add_argument("--format", choices=["csv", "text"])
        p.add_argument("--seed", type=int)
        if bootstrap:
            p.add_argument("--reps", type=int)
            p.add_argument("--block-len", dest="block_len", type=int)
            p.add_argument("--threads", type=int)
            p.add_argument("--min-obs", dest="min_obs", type=int)

    add_common(sub.add_parser("correlate", help="pooled pairwise correlations"))
    add_common(sub.add_parser("var-leadlag", help="average VAR(1) with bootstrap"), bootstrap=True)

    retail = sub.add_parser("retail", help="monthly order-flow elasticities")
    add_common(retail)
    retail.add_argument("--size-group", dest="size_group", choices=["100-1999", "100-9999"])
    retail.add_argument("--delta", choices=["log", "arith"])
    retail.add_argument("--estimator", choices=["pooled", "by-ticker"])

    pressure = sub.add_parser("price-pressure", help="forward-return regressions")
    add_common(pressure)
    pressure.add_argument("--nw-lags", dest="nw_lags", type=int)
    pressure.add_argument(
        "--drop-noise", dest="drop_noise", action="store_const", const=True, default=None
    )

    event = sub.add_parser("ipo-event", help="listing-week attention and returns")
    add_common(event)
    event.add_argument("--window", type=int)
    event.add_argument("--min-group", dest="min_group", type=int)

    add_common(sub.add_parser("ipo-cross", help="first-day return cross-section"))
    add_common(sub.add_parser("metrics", help="dataset and panel summary"))

    synth = sub.add_parser("synth", help="write a synthetic dataset")
    synth.add_argument("--out", required=True, help="dataset directory to create")
    synth.add_argument("--seed", type=int, default=0)
    synth.add_argument("--tickers", type=int, default=300)
    synth.add_argument("--weeks", type=int, default=260)
    synth.add_argument("--ipos", type=int, default=0)
    synth.add_argument("--noise-rate", dest="noise_rate", type=float, default=0.0)
    synth.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="NAME=VALUE",
        help="override any generator field",
    )
    return parser


def _write(text: str, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    print(f"wrote {path}")


def _emit_table(table: StudyTable, cfg: RunConfig, command: str, filename: str) -> None:
    comment = cfg.config_line(command)
    if cfg.format == "text":
        text = render_text(table, comment=comment)
        path = Path(cfg.out) / filename.replace(".csv", ".txt")
    else:
        text = render_csv(table, comment=comment)
        path = Path(cfg.out) / filename
    _write(text, path)


def _series_csv(comment: str, header: tuple[str, str], rows) -> str:
    lines = [f"# {comment}", f"{header[0]},{header[1]}"]
    for a, b in rows:
        lines.append(f"{a},{repr(float(b))}")
    return "\n".join(lines) + "\n"


def _run_study(ns: argparse.Namespace) -> int:
    cfg = resolve_config(ns)
    inputs, reports = load_inputs(cfg.data)
    period = resolve_period(cfg.period)
    command = ns.command

    if command == "correlate":
        _emit_table(run_correlation_study(inputs, period), cfg, command, "table_2.csv")
    elif command == "var-leadlag":
        boot = BootstrapConfig(block_len=cfg.block_len, reps=cfg.reps, seed=cfg.seed)
        table = run_var_leadlag_study(
            inputs, period, boot, min_obs=cfg.min_obs, n_threads=cfg.threads
        )
        _emit_table(table, cfg, command, "table_3.csv")
    elif command == "retail":
        table = run_retail_study(
            inputs,
            period,
            cfg.size_group,
            delta=cfg.delta,
            estimator=cfg.estimator,
        )
        _emit_table(table, cfg, command, "table_4.csv")
    elif command == "price-pressure":
        table = run_price_pressure_study(
            inputs, period, cfg.drop_noise, nw_lags=cfg.nw_lags
        )
        filename = "table_6.csv" if cfg.drop_noise else "table_5.csv"
        _emit_table(table, cfg, command, filename)
    elif command == "ipo-event":
        profile, table = run_ipo_event_study(
            inputs, period, window=cfg.window, min_group=cfg.min_group
        )
        _emit_table(table, cfg, command, "table_7.csv")
        comment = cfg.config_line(command)
        out = Path(cfg.out)
        for fname, col in [
            ("fig4_series.csv", "mean_log_svi"),
            ("fig4_median_series.csv", "median_log_svi"),
            ("fig5_series.csv", "mean_asvi"),
            ("fig5_median_series.csv", "median_asvi"),
        ]:
            rows = list(zip(profile["event_week"], profile[col]))
            _write(_series_csv(comment, ("event_week", col), rows), out / fname)
        day1 = [
            ("Low", table.get(0, 0).value),
            ("High", table.get(1, 0).value),
        ]
        _write(
            _series_csv(comment, ("group", "mean_day1_return_pct"), day1),
            out / "fig6_series.csv",
        )
    elif command == "ipo-cross":
        _emit_table(run_ipo_cross_section(inputs, period), cfg, command, "table_8.csv")
    elif command == "metrics":
        text = _metrics_csv(inputs, reports, period, cfg, command)
        _write(text, Path(cfg.out) / "metrics.csv")
    else:
        raise InvalidConfig(f"unknown command {command!r}")
    return 0


def _metrics_csv(inputs: StudyInputs, reports, period, cfg: RunConfig, command: str) -> str:
    panel, _ = study_panel(inputs, period)
    lines = [f"# {cfg.config_line(command)}", "metric,value"]

    def add(name: str, value) -> None:
        lines.append(f"{name},{repr(float(value))}")

    for name, report in sorted(reports.items()):
        add(f"{name}_rows_accepted", report.rows_accepted)
        add(f"{name}_rows_rejected", report.rows_rejected)
    add("panel_rows", len(panel))
    add("panel_tickers", panel["ticker"].nunique() if len(panel) else 0)
    if len(panel):
        add("zero_svi_share", float((panel["svi"] == 0).mean()))
        asvi = panel["asvi"].dropna()
        add("asvi_rows", len(asvi))
        if len(asvi):
            add("asvi_mean", asvi.mean())
            add("asvi_sd", asvi.std(ddof=1))
        turn = panel["abn_turnover"].dropna()
        add("abn_turnover_rows", len(turn))
        if len(turn):
            add("abn_turnover_sd", turn.std(ddof=1))
    return "\n".join(lines) + "\n"


def _run_synth(ns: argparse.Namespace) -> int:
    fields = {
        "seed": ns.seed,
        "n_tickers": ns.tickers,
        "n_weeks": ns.weeks,
        "ipo_count": ns.ipos,
        "noise_ticker_rate": ns.noise_rate,
    }
    valid = {f.name for f in DgpConfig.__dataclass_fields__.values()}
    for override in ns.overrides:
        if "=" not in override:
            raise InvalidConfig(f"--set needs NAME=VALUE, got {override!r}")
        name, _, value = override.partition("=")
        name = name.strip()
        if name not in valid:
            raise InvalidConfig(f"unknown generator field {name!r}")
        current = DgpConfig.__dataclass_fields__[name].default
        if not isinstance(current, (int, float)):
            raise InvalidConfig(f"field {name!r} cannot be set from the command line")
        try:
            fields[name] = (
                int(value.strip()) if isinstance(current, int) else float(value.strip())
            )
        except ValueError:
            raise InvalidConfig(f"bad value for {name!r}: {value.strip()!r}") from None
    cfg = DgpConfig(**fields)
    data: SynthData = generate(cfg)
    comment = f"config: command=synth seed={cfg.seed} tickers={cfg.n_tickers} weeks={cfg.n_weeks}"
    write_dataset(data, ns.out, comment=comment)
    print(f"wrote dataset to {ns.out}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else 2
    if ns.command is None:
        parser.print_help()
        return 2
    try:
        if ns.command == "synth":
            return _run_synth(ns)
        return _run_study(ns)
    except SvipanelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    raise SystemExit(main())
