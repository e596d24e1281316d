"""Intrusion detection in control-system outputs from concomitant differences."""

from .core_stats import (
    ConcomitantSeries,
    IncrementalState,
    PairedSample,
    StatTriple,
    Trajectory,
    compute_B0,
    compute_stats,
    concomitant_sort,
    incremental_insert,
    incremental_trajectory,
    prefix_trajectory,
)
from .detector import (
    BLabel,
    BTrend,
    Decision,
    ILabel,
    ITrend,
    TrendParams,
    Verdict,
    assess_B_trend,
    assess_I_trend,
    detect,
    rule_of_thumb,
)
from .errors import (
    BadParameters,
    DegenerateTransfer,
    DetectionError,
    DomainViolation,
    DuplicateInput,
    EndpointInfoRequired,
    InsufficientData,
    NoVariation,
    TooShort,
)
from .harness import Scenario, get_preset, list_presets, run_replications, run_scenario
from .stochastic import InputModel, IntrusionModel, generate_outputs, sample_inputs
from .transfer import TransferFunction, endpoint_equal, get_transfer, limit_I

__version__ = "0.1.0"

__all__ = [
    "BLabel",
    "BTrend",
    "BadParameters",
    "ConcomitantSeries",
    "Decision",
    "DegenerateTransfer",
    "DetectionError",
    "DomainViolation",
    "DuplicateInput",
    "EndpointInfoRequired",
    "ILabel",
    "ITrend",
    "IncrementalState",
    "InputModel",
    "InsufficientData",
    "IntrusionModel",
    "NoVariation",
    "PairedSample",
    "Scenario",
    "StatTriple",
    "TooShort",
    "Trajectory",
    "TransferFunction",
    "TrendParams",
    "Verdict",
    "assess_B_trend",
    "assess_I_trend",
    "compute_B0",
    "compute_stats",
    "concomitant_sort",
    "detect",
    "endpoint_equal",
    "generate_outputs",
    "get_preset",
    "get_transfer",
    "incremental_insert",
    "incremental_trajectory",
    "limit_I",
    "list_presets",
    "prefix_trajectory",
    "rule_of_thumb",
    "run_replications",
    "run_scenario",
    "sample_inputs",
]
