"""Multi-resonance pulse gate: one orthogonal pump envelope per cavity resonance.

In the full-conversion, narrow-linewidth limit the output of resonance ``m``
at its line centre is ``-sum_l beta_m(omega_{-l}) a_s(omega_l)``, so the
device implements the ``M x N`` matrix ``U[m, l] = -beta_m(omega_{-l})``.
Away from that limit each resonance is analysed as an independent
single-resonance gate with its own pump.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .csfg import QpgMetrics, QpgParams, kernel_transfer, qpg_metrics
from .errors import ParameterError
from .grid import FrequencyGrid, reverse_bins
from .pump import ORTHOGONALITY_TOLERANCE, PumpSet, overlap_matrix

ROW_TOLERANCE = 1e-8
FSR_GUARD = 1e-2


@dataclass(frozen=True, eq=False)
class MqpgConfig:
    grid: FrequencyGrid
    gamma: float
    eta: float
    fsr: float
    pumps: PumpSet

    def __post_init__(self):
        if not (self.gamma > 0 and self.fsr > 0) or self.eta < 0:
            raise ParameterError("gamma and fsr must be positive, eta non-negative")
        if self.pumps.grid != self.grid:
            raise ParameterError("pump set must live on the config grid")
        if self.gamma / self.fsr >= FSR_GUARD:
            raise ParameterError(f"gamma/fsr = {self.gamma / self.fsr:.3g} violates gamma << FSR "
                                 f"(guard {FSR_GUARD:g})")
        # re-validates bandwidth < FSR for every member
        PumpSet(self.pumps.members, self.fsr)

    def single_resonance(self, m: int) -> QpgParams:
        if not 0 <= m < len(self.pumps):
            raise IndexError(f"resonance {m} outside 0..{len(self.pumps) - 1}")
        return QpgParams(self.grid, self.gamma, self.eta, self.pumps.members[m])


def matched_config(grid: FrequencyGrid, gamma_over_dw: float, pumps: PumpSet,
                   fsr_bins: float | None = None) -> MqpgConfig:
    """Config on the full-conversion line ``eta = sqrt(gamma T)``; FSR defaults to the grid span."""
    gamma = gamma_over_dw * grid.bin_spacing
    fsr = (fsr_bins if fsr_bins is not None else 2 * grid.n_modes) * grid.bin_spacing
    return MqpgConfig(grid, gamma, float(np.sqrt(gamma * grid.window_T)), fsr, pumps)


@dataclass(frozen=True, eq=False)
class MultiportUnitary:
    matrix: np.ndarray
    resonance_labels: np.ndarray
    bin_labels: np.ndarray

    @property
    def row_residual(self) -> float:
        M = self.matrix.shape[0]
        return float(np.linalg.norm(self.matrix @ self.matrix.conj().T - np.eye(M)))

    @property
    def column_residual(self) -> float:
        N = self.matrix.shape[1]
        return float(np.linalg.norm(self.matrix.conj().T @ self.matrix - np.eye(N)))

    @property
    def is_unitary(self) -> bool:
        """True for a square matrix; ``M < N`` gives a row isometry."""
        M, N = self.matrix.shape
        return M == N and self.row_residual < ROW_TOLERANCE

    def apply(self, signal) -> np.ndarray:
        return self.matrix @ np.asarray(signal, dtype=complex)


def build_multiport(config: MqpgConfig) -> MultiportUnitary:
    grid = config.grid
    rows = np.array([-reverse_bins(grid, p.spectral) for p in config.pumps.members])
    U = MultiportUnitary(rows, np.arange(len(config.pumps)), grid.indices.copy())
    gram = overlap_matrix(config.pumps.members)
    # rows of U are conjugates of the pump spectra, so U U^dag is the transposed Gram matrix
    if np.max(np.abs(U.matrix @ U.matrix.conj().T - gram.T)) > 1e-10:
        raise ParameterError("multiport rows disagree with the pump-set overlaps")
    return U


@dataclass(frozen=True)
class CrossTermReport:
    max_residual: float
    residuals: tuple
    valid: bool


def cross_term_check(pumps) -> CrossTermReport:
    """Largest ``sum_{k != m} |<beta_m, beta_k>|`` over resonances ``m``.

    Accepts an :class:`MqpgConfig`, a :class:`PumpSet`, or a plain sequence of
    profiles (which may overlap; this is report-only).
    """
    if isinstance(pumps, MqpgConfig):
        pumps = pumps.pumps
    members = pumps.members if isinstance(pumps, PumpSet) else tuple(pumps)
    gram = np.abs(overlap_matrix(members))
    np.fill_diagonal(gram, 0.0)
    residuals = gram.sum(axis=1)
    worst = float(residuals.max(initial=0.0))
    return CrossTermReport(worst, tuple(float(r) for r in residuals), worst < ORTHOGONALITY_TOLERANCE)


def per_resonance_metrics(config: MqpgConfig, m: int, **kernel_kwargs) -> QpgMetrics:
    params = config.single_resonance(m)
    return qpg_metrics(kernel_transfer(params, **kernel_kwargs), params.pump)
