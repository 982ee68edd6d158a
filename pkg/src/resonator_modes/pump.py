"""Pump envelopes: rectangular, Hermite-Gauss, random-flat, constant, and
orthogonal multi-tone sets.

Two normalizations exist. ``TemporalUnit`` profiles satisfy
``sum_k |beta(t_k)|^2 T/N == 1`` (equivalently, by Parseval, unit spectral
2-norm); these drive the pulse-gate models. ``RawSpectral`` keeps the
dimensionless amplitude used by the down-conversion JSF, whose overall scale
is carried by the coupling ``eta``.

Random pumps use the PCG64 bit generator seeded through ``SeedSequence``;
complex Gaussians come from Box-Muller applied to ``Generator.random``
doubles, which are reproducible across platforms for a given seed.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from math import factorial

import numpy as np
from scipy.special import eval_hermite

from .errors import OrthogonalityError, ParameterError, TruncationError
from .grid import (
    ContinuousAxis,
    FrequencyGrid,
    from_time_domain,
    temporal_norm,
    temporal_overlap,
    to_time_domain,
)

EDGE_TOLERANCE = 1e-6
ORTHOGONALITY_TOLERANCE = 1e-8


class PumpKind(enum.Enum):
    RECTANGULAR = "rectangular"
    HERMITE_GAUSS = "hermite_gauss"
    RANDOM_FLAT = "random_flat"
    CONSTANT = "constant"
    COMPOSITE = "composite"


class NormMode(enum.Enum):
    TEMPORAL_UNIT = "temporal_unit"
    RAW_SPECTRAL = "raw_spectral"


@dataclass(frozen=True, eq=False)
class PumpProfile:
    """Pump envelope ``beta`` sampled on a grid or axis.

    ``params`` records the constructor arguments; for analytic kinds
    :meth:`at` evaluates the same profile off-grid (the down-conversion JSF
    needs ``beta(omega_s + omega_i)``).
    """

    grid: FrequencyGrid | ContinuousAxis
    spectral: np.ndarray
    kind: PumpKind
    norm_mode: NormMode
    params: dict = field(default_factory=dict)
    temporal: np.ndarray | None = None

    def __post_init__(self):
        spectral = np.asarray(self.spectral, dtype=complex)
        spectral.setflags(write=False)
        object.__setattr__(self, "spectral", spectral)
        if isinstance(self.grid, FrequencyGrid) and self.temporal is None:
            temporal = to_time_domain(self.grid, spectral)
            temporal.setflags(write=False)
            object.__setattr__(self, "temporal", temporal)

    def at(self, omega) -> np.ndarray:
        omega = np.asarray(omega, dtype=float)
        scale = self.params.get("scale", 1.0)
        if self.kind is PumpKind.RECTANGULAR:
            return np.where(np.abs(omega) <= self.params["bandwidth"] / 2, 1.0, 0.0).astype(complex)
        if self.kind is PumpKind.HERMITE_GAUSS:
            return scale * hermite_gauss_function(self.params["order"], omega / self.params["width"])
        raise ParameterError(f"{self.kind.value} pump has no closed-form spectrum")

    def norm(self) -> float:
        """Temporal norm on a bin grid; Riemann integral of ``|beta|^2`` on an axis."""
        if isinstance(self.grid, FrequencyGrid):
            return temporal_norm(self.grid, self.temporal)
        return float(np.sum(np.abs(self.spectral) ** 2) * self.grid.spacing)

    def with_phase(self, phase: float) -> "PumpProfile":
        return PumpProfile(self.grid, self.spectral * np.exp(1j * phase), self.kind,
                           self.norm_mode, dict(self.params))


def hermite_gauss_function(order: int, x) -> np.ndarray:
    """Unnormalized ``H_k(x) exp(-x^2/2)`` (physicists' Hermite polynomials)."""
    x = np.asarray(x, dtype=float)
    return eval_hermite(order, x) * np.exp(-x * x / 2)


def _hg_continuum_norm(order: int, width: float) -> float:
    # integral of |H_k(w/s) e^{-w^2/2s^2}|^2 dw = s sqrt(pi) 2^k k!
    return 1.0 / np.sqrt(width * np.sqrt(np.pi) * 2.0**order * factorial(order))


def rectangular_pump(axis: ContinuousAxis, bandwidth: float) -> PumpProfile:
    """Rectangular spectrum of full width ``bandwidth`` (value 1 inside, 0 outside).

    The profile is evaluated at sum frequencies that can lie outside ``axis``,
    so a bandwidth wider than the axis is legal; bandwidths below two axis
    spacings cannot be resolved and are rejected.
    """
    if not bandwidth > 0:
        raise ParameterError(f"pump bandwidth must be positive, got {bandwidth}")
    if bandwidth < 2 * axis.spacing:
        raise ParameterError("pump bandwidth is narrower than two axis spacings")
    omega = axis.points - axis.center
    spectral = np.where(np.abs(omega) <= bandwidth / 2, 1.0, 0.0)
    return PumpProfile(axis, spectral, PumpKind.RECTANGULAR, NormMode.RAW_SPECTRAL,
                       {"bandwidth": float(bandwidth)})


def hermite_gauss_pump(grid: FrequencyGrid | ContinuousAxis, order: int, width: float) -> PumpProfile:
    """Spectral Hermite-Gauss mode ``H_k(w/width) exp(-w^2 / 2 width^2)``.

    On a :class:`FrequencyGrid` the result is ``TemporalUnit``-normalized; on
    a :class:`ContinuousAxis` it has unit ``integral |beta|^2 dw``.
    """
    if int(order) != order or order < 0:
        raise ParameterError(f"order must be a non-negative integer, got {order}")
    if not width > 0:
        raise ParameterError(f"width must be positive, got {width}")
    order = int(order)
    if isinstance(grid, FrequencyGrid):
        omega = grid.omegas
    else:
        omega = grid.points - grid.center
    raw = hermite_gauss_function(order, omega / width)
    peak = np.max(np.abs(raw))
    edge = max(abs(raw[0]), abs(raw[-1]))
    if peak == 0 or edge >= EDGE_TOLERANCE * peak:
        raise TruncationError(
            f"HG-{order} profile of width {width:g} is not negligible at the grid edge "
            f"(edge/peak = {edge / peak if peak else np.inf:.2e}); reduce width or enlarge grid")
    if isinstance(grid, FrequencyGrid):
        scale = 1.0 / np.linalg.norm(raw)
    else:
        scale = 1.0 / np.sqrt(np.sum(raw**2) * grid.spacing)
    return PumpProfile(grid, raw * scale, PumpKind.HERMITE_GAUSS, NormMode.TEMPORAL_UNIT,
                       {"order": order, "width": float(width), "scale": float(scale)})


def complex_gaussians(seed: int, count: int) -> np.ndarray:
    """Unit-variance circular complex Gaussians via Box-Muller on a PCG64 stream."""
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    u1 = rng.random(count)
    u2 = rng.random(count)
    radius = np.sqrt(-np.log1p(-u1))  # 1 - u1 lies in (0, 1]
    return radius * np.exp(2j * np.pi * u2)


def random_flat_pump(grid: FrequencyGrid, M: int, seed: int) -> PumpProfile:
    """``M`` centred bins of i.i.d. complex Gaussian amplitudes, unit temporal norm."""
    if int(M) != M or not 1 <= M <= grid.n_modes:
        raise ParameterError(f"M must be an integer in [1, {grid.n_modes}], got {M}")
    M = int(M)
    draws = complex_gaussians(seed, M)
    spectral = np.zeros(grid.n_modes, dtype=complex)
    start = grid.zero_index - M // 2
    spectral[start:start + M] = draws
    spectral /= np.linalg.norm(spectral)
    return PumpProfile(grid, spectral, PumpKind.RANDOM_FLAT, NormMode.TEMPORAL_UNIT,
                       {"M": M, "seed": int(seed)})


def constant_pump(grid: FrequencyGrid) -> PumpProfile:
    """``beta(t) = 1/sqrt(T)``: a single unit amplitude in the n = 0 bin."""
    spectral = np.zeros(grid.n_modes, dtype=complex)
    spectral[grid.zero_index] = 1.0
    temporal = np.full(grid.n_modes, 1 / np.sqrt(grid.window_T), dtype=complex)
    return PumpProfile(grid, spectral, PumpKind.CONSTANT, NormMode.TEMPORAL_UNIT, {}, temporal)


def pump_from_temporal(grid: FrequencyGrid, temporal, normalize: bool = True) -> PumpProfile:
    spectral = from_time_domain(grid, temporal)
    if normalize:
        spectral = spectral / np.linalg.norm(spectral)
    return PumpProfile(grid, spectral, PumpKind.COMPOSITE,
                       NormMode.TEMPORAL_UNIT if normalize else NormMode.RAW_SPECTRAL)


def spectral_bandwidth(pump: PumpProfile, rel: float = EDGE_TOLERANCE) -> float:
    """Width of the smallest bin interval holding every amplitude above ``rel * peak``."""
    mag = np.abs(pump.spectral)
    live = np.nonzero(mag >= rel * mag.max())[0]
    spacing = pump.grid.bin_spacing if isinstance(pump.grid, FrequencyGrid) else pump.grid.spacing
    return float((live[-1] - live[0] + 1) * spacing)


def overlap_matrix(members) -> np.ndarray:
    """Gram matrix of temporal overlaps ``<beta_m, beta_l>``."""
    grid = members[0].grid
    temporal = np.array([m.temporal for m in members])
    return temporal.conj() @ temporal.T * grid.dt


@dataclass(frozen=True, eq=False)
class PumpSet:
    """Mutually orthogonal pump envelopes, one per cavity resonance."""

    members: tuple
    fsr_offset: float | None = None

    def __post_init__(self):
        members = tuple(self.members)
        object.__setattr__(self, "members", members)
        if not members:
            raise ParameterError("a pump set needs at least one member")
        grid = members[0].grid
        if any(m.grid != grid for m in members):
            raise ParameterError("all pump set members must share one grid")
        gram = overlap_matrix(members)
        off = gram - np.diag(np.diag(gram))
        if members and np.max(np.abs(off), initial=0.0) >= ORTHOGONALITY_TOLERANCE:
            raise OrthogonalityError(
                f"pump envelopes overlap by up to {np.max(np.abs(off)):.3e} "
                f"(tolerance {ORTHOGONALITY_TOLERANCE:g})")
        if self.fsr_offset is not None:
            for m in members:
                if spectral_bandwidth(m) >= self.fsr_offset:
                    raise ParameterError("pump bandwidth must stay below the free spectral range")

    def __len__(self):
        return len(self.members)

    @property
    def grid(self) -> FrequencyGrid:
        return self.members[0].grid


def mqpg_pump_set(grid: FrequencyGrid, orders, width: float, fsr_offset: float | None = None) -> PumpSet:
    orders = [int(k) for k in orders]
    if len(set(orders)) != len(orders):
        raise OrthogonalityError(f"duplicate Hermite-Gauss orders {orders}")
    return PumpSet(tuple(hermite_gauss_pump(grid, k, width) for k in orders), fsr_offset)


def complete_hermite_set(grid: FrequencyGrid, count: int, width: float) -> PumpSet:
    """First ``count`` sampled Hermite-Gauss modes, Gram-Schmidt orthonormalized on the grid.

    With ``count == grid.n_modes`` the set is a complete orthonormal basis;
    high orders are not grid-limited, so the edge check is skipped here.
    """
    if not 1 <= count <= grid.n_modes:
        raise ParameterError(f"count must lie in [1, {grid.n_modes}]")
    x = grid.omegas / width
    # scaled recurrence keeps high orders finite: psi_k ~ H_k e^{-x^2/2} / sqrt(2^k k!)
    columns = np.empty((grid.n_modes, count))
    columns[:, 0] = np.exp(-x * x / 2)
    if count > 1:
        columns[:, 1] = np.sqrt(2.0) * x * columns[:, 0]
    for k in range(2, count):
        columns[:, k] = (np.sqrt(2.0 / k) * x * columns[:, k - 1]
                         - np.sqrt((k - 1) / k) * columns[:, k - 2])
    q, r = np.linalg.qr(columns)
    q = q * np.sign(np.diag(r))
    members = tuple(
        PumpProfile(grid, q[:, k], PumpKind.HERMITE_GAUSS, NormMode.TEMPORAL_UNIT,
                    {"order": k, "width": float(width), "orthonormalized": True})
        for k in range(count))
    return PumpSet(members)


def default_width(grid: FrequencyGrid) -> float:
    """Default Hermite-Gauss width: N/16 bins, which clears the 1e-6 edge test up to order 4."""
    return grid.n_modes / 16 * grid.bin_spacing


def parse_pump_spec(spec: str, grid: FrequencyGrid | ContinuousAxis | None = None):
    """Parse the pump mini-language.

    ``rect:<bandwidth>``, ``hg:<order>[:<width>]``, ``flat``,
    ``random:<M>:<seed>``, ``hgset:<k1,k2,...>[:<width>]``. Widths and
    bandwidths are angular frequencies in the caller's rate unit. Returns a
    :class:`PumpProfile` or, for ``hgset``, a :class:`PumpSet`; with
    ``grid=None`` a dict describing the parsed spec is returned instead.
    """
    parts = spec.strip().split(":")
    kind = parts[0].lower()
    try:
        if kind == "rect" and len(parts) == 2:
            parsed = {"kind": "rect", "bandwidth": float(parts[1])}
        elif kind == "hg" and len(parts) in (2, 3):
            parsed = {"kind": "hg", "order": int(parts[1]),
                      "width": float(parts[2]) if len(parts) == 3 else None}
        elif kind == "flat" and len(parts) == 1:
            parsed = {"kind": "flat"}
        elif kind == "random" and len(parts) == 3:
            parsed = {"kind": "random", "M": int(parts[1]), "seed": int(parts[2])}
        elif kind == "hgset" and len(parts) in (2, 3):
            parsed = {"kind": "hgset", "orders": [int(k) for k in parts[1].split(",") if k],
                      "width": float(parts[2]) if len(parts) == 3 else None}
        else:
            raise ValueError
    except ValueError:
        raise ParameterError(f"cannot parse pump spec {spec!r}") from None
    if grid is None:
        return parsed

    def width_or_default():
        if parsed["width"] is not None:
            return parsed["width"]
        if isinstance(grid, FrequencyGrid):
            return default_width(grid)
        raise ParameterError("hg pumps on a continuous axis need an explicit width")

    if parsed["kind"] == "rect":
        if not isinstance(grid, ContinuousAxis):
            raise ParameterError("rect pumps are defined on continuous axes")
        return rectangular_pump(grid, parsed["bandwidth"])
    if parsed["kind"] == "hg":
        return hermite_gauss_pump(grid, parsed["order"], width_or_default())
    if not isinstance(grid, FrequencyGrid):
        raise ParameterError(f"{parsed['kind']} pumps need a frequency-bin grid")
    if parsed["kind"] == "flat":
        return constant_pump(grid)
    if parsed["kind"] == "random":
        return random_flat_pump(grid, parsed["M"], parsed["seed"])
    return mqpg_pump_set(grid, parsed["orders"], width_or_default())


def check_normalized(pump: PumpProfile, tol: float = 1e-10) -> None:
    if pump.norm_mode is not NormMode.TEMPORAL_UNIT or abs(pump.norm() - 1) > tol:
        raise ParameterError("pump must be TemporalUnit-normalized")


def overlap(a: PumpProfile, b: PumpProfile) -> complex:
    return temporal_overlap(a.grid, a.temporal, b.temporal)
