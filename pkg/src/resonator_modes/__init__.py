"""Temporal-mode tools for resonator-enhanced down-conversion and pulse gates."""

from .csfg import (
    Method,
    QpgMetrics,
    QpgParams,
    TransferPair,
    flat_pump_coefficients,
    flat_transfer,
    kernel_transfer,
    lossy_coefficients,
    matched_params,
    perturbative_transfer,
    qpg_metrics,
)
from .cspdc import CavityParams, build_jsf_dual, build_jsf_single, jsf_purity, pair_metrics
from .errors import (
    ConvergenceError,
    DataError,
    NumericalResolutionError,
    OrthogonalityError,
    ParameterError,
    TruncationError,
)
from .grid import ContinuousAxis, FrequencyGrid, make_grid
from .mqpg import MqpgConfig, MultiportUnitary, build_multiport
from .oracle import ode_oracle
from .pump import PumpProfile, PumpSet, hermite_gauss_pump, parse_pump_spec

__version__ = "0.1.0"
