"""Two central qubits dephased by an anisotropic XY chain with three-site interaction."""

from chaindecoherence.exceptions import (
    ConfigError,
    ConsistencyError,
    DegenerateModeError,
    PositivityError,
)
from chaindecoherence.spectrum import ChainParams, CouplingParams, DressedIndex, ModeData, mode_data
from chaindecoherence.decoherence import DecoherenceConfig, decoherence_factor, mode_overlap_oracle
from chaindecoherence.xstate import BellDiagonalCoeffs, XState, evolve_state
from chaindecoherence.correlations import CorrelationReport, correlation_report
from chaindecoherence.analysis import (
    RunConfig,
    TimeSeries,
    EventReport,
    time_series,
    sudden_death_time,
    transition_time,
)
from chaindecoherence.estimator import DecoherenceModel

__version__ = "0.1.0"

__all__ = [
    "BellDiagonalCoeffs",
    "ChainParams",
    "ConfigError",
    "ConsistencyError",
    "CorrelationReport",
    "CouplingParams",
    "DecoherenceConfig",
    "DecoherenceModel",
    "DegenerateModeError",
    "DressedIndex",
    "EventReport",
    "ModeData",
    "PositivityError",
    "RunConfig",
    "TimeSeries",
    "XState",
    "correlation_report",
    "decoherence_factor",
    "evolve_state",
    "mode_data",
    "mode_overlap_oracle",
    "sudden_death_time",
    "time_series",
    "transition_time",
]
