"""Weekly search-attention panels and the studies built on them."""

from .attention import (
    Horizon,
    abnormal_return,
    abnormal_turnover,
    build_attention_panel,
    compute_apsvi,
    compute_asvi,
    cross_sectional_standardize,
    forward_column,
    forward_return_bps,
)
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
    week_of,
)
from .econ import (
    BootstrapConfig,
    block_bootstrap_pvalue,
    corr_matrix,
    fama_macbeth,
    newey_west_se_of_mean,
    ols,
    var1,
    var_aggregate,
    welch_t_test,
)
from .errors import SvipanelError
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
from .studies import (
    PERIODS,
    PeriodSpec,
    StudyInputs,
    compute_media,
    compute_price_revision,
    load_inputs,
    period_for_years,
    run_correlation_study,
    run_ipo_cross_section,
    run_ipo_event_study,
    run_price_pressure_study,
    run_retail_study,
    run_var_leadlag_study,
    study_panel,
)
from .synth import DgpConfig, SynthData, generate, generate_var_panel, write_dataset
from .tables import Cell, StudyTable, format_value, parse_csv, render_csv, render_text

__version__ = "0.1.0"

__all__ = [
    "Horizon",
    "abnormal_return",
    "abnormal_turnover",
    "build_attention_panel",
    "compute_apsvi",
    "compute_asvi",
    "cross_sectional_standardize",
    "forward_column",
    "forward_return_bps",
    "Bucket",
    "Dash5Record",
    "IpoRecord",
    "KeywordKind",
    "Month",
    "SecurityType",
    "SviObservation",
    "WeeklyMarketRow",
    "WeekStamp",
    "week_of",
    "BootstrapConfig",
    "block_bootstrap_pvalue",
    "corr_matrix",
    "fama_macbeth",
    "newey_west_se_of_mean",
    "ols",
    "var1",
    "var_aggregate",
    "welch_t_test",
    "SvipanelError",
    "IngestReport",
    "NoiseTickerList",
    "apply_ipo_exclusions",
    "filter_noise_tickers",
    "load_dash5",
    "load_ipo",
    "load_market",
    "load_noise_tickers",
    "load_svi",
    "PERIODS",
    "PeriodSpec",
    "StudyInputs",
    "compute_media",
    "compute_price_revision",
    "load_inputs",
    "period_for_years",
    "run_correlation_study",
    "run_ipo_cross_section",
    "run_ipo_event_study",
    "run_price_pressure_study",
    "run_retail_study",
    "run_var_leadlag_study",
    "study_panel",
    "DgpConfig",
    "SynthData",
    "generate",
    "generate_var_panel",
    "write_dataset",
    "Cell",
    "StudyTable",
    "format_value",
    "parse_csv",
    "render_csv",
    "render_text",
]
