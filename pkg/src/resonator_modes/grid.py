"""Frequency-bin grids and the time/frequency transform pair.

All spectra in the package live on a :class:`FrequencyGrid`: ``N`` bins
``omega_n = n * d_omega`` with ``n = -N/2 .. N/2 - 1`` and
``d_omega = 2 pi / T``. The expansion convention is

    x(t) = (1/sqrt(T)) * sum_n X(omega_n) exp(-i omega_n t)

and every module goes through :func:`to_time_domain` /
:func:`from_time_domain` instead of calling FFTs directly, so the sign and
normalization live in exactly one place.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError


@dataclass(frozen=True)
class FrequencyGrid:
    window_T: float
    n_modes: int
    bin_spacing: float = field(init=False)

    def __post_init__(self):
        if not np.isfinite(self.window_T) or self.window_T <= 0:
            raise ParameterError(f"window_T must be positive, got {self.window_T}")
        if int(self.n_modes) != self.n_modes or self.n_modes < 2 or self.n_modes % 2:
            raise ParameterError(f"n_modes must be an even integer >= 2, got {self.n_modes}")
        object.__setattr__(self, "n_modes", int(self.n_modes))
        object.__setattr__(self, "bin_spacing", 2 * np.pi / self.window_T)

    @property
    def indices(self) -> np.ndarray:
        return np.arange(-self.n_modes // 2, self.n_modes // 2)

    @property
    def omegas(self) -> np.ndarray:
        return self.indices * self.bin_spacing

    @property
    def sample_times(self) -> np.ndarray:
        step = self.window_T / self.n_modes
        return -self.window_T / 2 + step * np.arange(self.n_modes)

    @property
    def dt(self) -> float:
        return self.window_T / self.n_modes

    @property
    def zero_index(self) -> int:
        """Array position of the n = 0 bin."""
        return self.n_modes // 2

    def position(self, n: int) -> int:
        """Array position of bin index ``n``."""
        if not -self.n_modes // 2 <= n < self.n_modes // 2:
            raise IndexError(f"bin {n} outside grid of {self.n_modes} modes")
        return n + self.n_modes // 2


def make_grid(window_T: float, n_modes: int) -> FrequencyGrid:
    return FrequencyGrid(float(window_T), n_modes)


@dataclass(frozen=True)
class ContinuousAxis:
    """Uniform, centred sampling of a continuous frequency axis."""

    center: float
    half_span: float
    n_points: int

    def __post_init__(self):
        if self.half_span <= 0:
            raise ParameterError("half_span must be positive")
        if self.n_points < 2:
            raise ParameterError("n_points must be >= 2")

    @property
    def spacing(self) -> float:
        return 2 * self.half_span / (self.n_points - 1)

    @property
    def points(self) -> np.ndarray:
        return np.linspace(self.center - self.half_span, self.center + self.half_span, self.n_points)


def _alternating(grid: FrequencyGrid) -> np.ndarray:
    # exp(-i omega_n t_0) with t_0 = -T/2 is (-1)^n
    return np.where(grid.indices % 2 == 0, 1.0, -1.0)


def _check_length(grid: FrequencyGrid, vec: np.ndarray) -> np.ndarray:
    vec = np.asarray(vec, dtype=complex)
    if vec.shape[-1] != grid.n_modes:
        raise ParameterError(f"expected trailing length {grid.n_modes}, got {vec.shape[-1]}")
    return vec


def to_time_domain(grid: FrequencyGrid, spectral) -> np.ndarray:
    """Evaluate ``x(t_k)`` on ``grid.sample_times``; works along the last axis."""
    X = _check_length(grid, spectral) * _alternating(grid)
    return np.fft.fft(np.fft.ifftshift(X, axes=-1), axis=-1) / np.sqrt(grid.window_T)


def from_time_domain(grid: FrequencyGrid, temporal) -> np.ndarray:
    """Inverse of :func:`to_time_domain`."""
    x = _check_length(grid, temporal)
    X = np.fft.fftshift(np.fft.ifft(x, axis=-1), axes=-1) * np.sqrt(grid.window_T)
    return X * _alternating(grid)


def evaluate_series(grid: FrequencyGrid, spectral, times) -> np.ndarray:
    """Band-limited interpolation: the expansion evaluated at arbitrary ``times``."""
    X = _check_length(grid, spectral)
    times = np.asarray(times, dtype=float)
    phase = np.exp(-1j * np.outer(times, grid.omegas))
    return phase @ X / np.sqrt(grid.window_T)


def refined_samples(grid: FrequencyGrid, spectral, factor: int) -> np.ndarray:
    """Band-limited values on the ``factor * N`` uniform lattice over [-T/2, T/2)."""
    X = _check_length(grid, spectral)
    M = grid.n_modes * factor
    padded = np.zeros(X.shape[:-1] + (M,), dtype=complex)
    start = M // 2 - grid.n_modes // 2
    padded[..., start:start + grid.n_modes] = X
    fine = make_grid(grid.window_T, M)
    return to_time_domain(fine, padded)


def temporal_norm(grid: FrequencyGrid, temporal) -> float:
    """Riemann sum of ``|x(t)|^2`` with weight ``T/N``."""
    return float(np.sum(np.abs(temporal) ** 2) * grid.dt)


def temporal_overlap(grid: FrequencyGrid, a, b) -> complex:
    """``sum_k conj(a_k) b_k T/N``."""
    return complex(np.vdot(a, b) * grid.dt)


def reverse_bins(grid: FrequencyGrid, spectral) -> np.ndarray:
    """Map ``X(omega_n)`` to ``X(omega_{-n})``; the -N/2 bin maps onto itself."""
    X = _check_length(grid, spectral)
    out = np.empty_like(X)
    out[..., 1:] = X[..., 1:][..., ::-1]
    out[..., 0] = X[..., 0]
    return out
