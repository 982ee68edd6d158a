"""Cavity-enhanced down-conversion: lineshapes, joint spectra, pair statistics.

Rates (``gamma``, ``iota``, pump bandwidth) and frequencies share a single
angular-frequency unit. The dual-cavity JSF is

    J(ws, wi) = -sqrt(2 pi) eta xi_s(ws) xi_i(wi) beta(ws + wi)

with the lossy Lorentzian ``xi(w) = sqrt(gamma/2pi) / (i w - (gamma + iota)/2)``.
The pump factor is kept so finite pump bandwidth shows up as residual
correlation; passing ``pump=None`` means ``beta == 1``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError
from .grid import ContinuousAxis
from .pump import PumpKind, PumpProfile
from .schmidt import SchmidtDecomposition, purity, schmidt

QUADRATURE_NODES = 1024


@dataclass(frozen=True)
class CavityParams:
    gamma: float
    internal_loss: float = 0.0
    fsr: float | None = None
    label: str = "signal"

    def __post_init__(self):
        if not self.gamma > 0:
            raise ParameterError(f"cavity decay rate must be positive, got {self.gamma}")
        # iota = gamma (critical coupling) is kept: the loss curves run up to it
        if not 0 <= self.internal_loss <= self.gamma:
            raise ParameterError(
                f"internal loss must satisfy 0 <= iota <= gamma, got iota={self.internal_loss}")
        if self.fsr is not None and not self.fsr > 0:
            raise ParameterError("free spectral range must be positive")

    @property
    def linewidth(self) -> float:
        """Loaded (broadened) linewidth ``gamma + iota``."""
        return self.gamma + self.internal_loss

    @property
    def finesse(self) -> float:
        if self.fsr is None:
            raise ParameterError("finesse needs a free spectral range")
        return self.fsr / self.gamma


def lineshape(omega, cavity: CavityParams, sign: str = "-"):
    """Cavity response ``xi^{-/+}(w) = sqrt(gamma/2pi) / (i w -/+ gamma/2)``.

    With internal loss only the ``-`` form exists; its pole moves to
    ``(gamma + iota)/2``.
    """
    omega = np.asarray(omega, dtype=float)
    amp = np.sqrt(cavity.gamma / (2 * np.pi))
    if sign == "-":
        return amp / (1j * omega - cavity.linewidth / 2)
    if sign == "+":
        if cavity.internal_loss > 0:
            raise ParameterError("the lossy lineshape is only defined for the '-' sign")
        return amp / (1j * omega + cavity.gamma / 2)
    raise ParameterError(f"sign must be '-' or '+', got {sign!r}")


class Provenance(enum.Enum):
    DUAL_CAVITY = "dual_cavity"
    SINGLE_CAVITY = "single_cavity"


class SingleCavityApprox(enum.Enum):
    BETA_OF_SUM = "beta_of_sum"
    BETA_OF_IDLER = "beta_of_idler"


@dataclass(frozen=True, eq=False)
class JointSpectralFunction:
    axis_s: ContinuousAxis
    axis_i: ContinuousAxis
    values: np.ndarray
    coupling: float
    provenance: Provenance
    record: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.values.shape != (self.axis_s.n_points, self.axis_i.n_points):
            raise ParameterError("JSF matrix shape does not match its axes")


def _pump_factor(pump: PumpProfile | None, omega) -> np.ndarray:
    if pump is None:
        return np.ones(np.shape(omega), dtype=complex)
    return pump.at(omega)


def build_jsf_dual(axis_s: ContinuousAxis, axis_i: ContinuousAxis,
                   cavity_s: CavityParams, cavity_i: CavityParams,
                   pump: PumpProfile | None, eta: float) -> JointSpectralFunction:
    if eta < 0:
        raise ParameterError("eta must be non-negative")
    if pump is not None and pump.kind is not PumpKind.RECTANGULAR:
        raise ParameterError("the dual-cavity JSF uses a rectangular pump (or None for beta == 1)")
    ws = axis_s.points - axis_s.center
    wi = axis_i.points - axis_i.center
    xs = lineshape(ws, cavity_s)
    xi = lineshape(wi, cavity_i)
    values = -np.sqrt(2 * np.pi) * eta * np.outer(xs, xi) * _pump_factor(pump, ws[:, None] + wi[None, :])
    return JointSpectralFunction(axis_s, axis_i, values, eta, Provenance.DUAL_CAVITY,
                                 {"cavity_s": cavity_s, "cavity_i": cavity_i, "pump": pump})


def build_jsf_single(axis_s: ContinuousAxis, axis_i: ContinuousAxis, cavity_s: CavityParams,
                     pump: PumpProfile, eta: float,
                     approximation: SingleCavityApprox | str = SingleCavityApprox.BETA_OF_IDLER
                     ) -> JointSpectralFunction:
    """Signal-only cavity: ``-eta xi_s(ws) beta(wi)`` or ``-eta xi_s(ws) beta(ws + wi)``.

    ``BETA_OF_IDLER`` is the narrow-cavity approximation and is exactly
    separable; ``BETA_OF_SUM`` keeps the full pump argument so the
    approximation error can be measured.
    """
    approximation = SingleCavityApprox(approximation)
    if eta < 0:
        raise ParameterError("eta must be non-negative")
    ws = axis_s.points - axis_s.center
    wi = axis_i.points - axis_i.center
    xs = lineshape(ws, cavity_s)
    if approximation is SingleCavityApprox.BETA_OF_IDLER:
        values = -eta * np.outer(xs, pump.at(wi))
    else:
        values = -eta * xs[:, None] * pump.at(ws[:, None] + wi[None, :])
    return JointSpectralFunction(axis_s, axis_i, values, eta, Provenance.SINGLE_CAVITY,
                                 {"cavity_s": cavity_s, "pump": pump, "approximation": approximation})


def jsf_purity(jsf: JointSpectralFunction) -> float:
    return purity(schmidt(jsf.values))


def pair_probability_closed_form(cavity_s: CavityParams, cavity_i: CavityParams, eta: float) -> float:
    """``p_si = 2 pi eta^2 gamma_s gamma_i / ((gamma_s + iota_s)(gamma_i + iota_i))``."""
    return (2 * np.pi * eta**2 * cavity_s.gamma / cavity_s.linewidth
            * cavity_i.gamma / cavity_i.linewidth)


def heralding_closed_form(partner: CavityParams) -> float:
    """Heralding efficiency of an arm: set by the *partner* arm's loss only."""
    return partner.gamma / partner.linewidth


def _tangent_nodes(scale: float, n: int):
    theta = (np.arange(n) + 0.5) * np.pi / n - np.pi / 2
    omega = scale * np.tan(theta)
    weight = scale / np.cos(theta) ** 2 * (np.pi / n)
    return omega, weight


def pair_probability_quadrature(cavity_s: CavityParams, cavity_i: CavityParams,
                                pump: PumpProfile | None, eta: float,
                                n_nodes: int = QUADRATURE_NODES) -> float:
    """``integral |J|^2 dws dwi`` over the whole plane.

    Midpoint rule in ``theta`` after ``w = (gamma/2) tan(theta)`` per axis;
    the map uses the lossless half-width, so with loss the integrand in
    ``theta`` is smooth but not constant.
    """
    ws, w_s = _tangent_nodes(cavity_s.gamma / 2, n_nodes)
    wi, w_i = _tangent_nodes(cavity_i.gamma / 2, n_nodes)
    prob_s = np.abs(lineshape(ws, cavity_s)) ** 2 * w_s
    prob_i = np.abs(lineshape(wi, cavity_i)) ** 2 * w_i
    if pump is None:
        return float(2 * np.pi * eta**2 * prob_s.sum() * prob_i.sum())
    mask = np.abs(_pump_factor(pump, ws[:, None] + wi[None, :])) ** 2
    return float(2 * np.pi * eta**2 * prob_s @ mask @ prob_i)


@dataclass(frozen=True)
class PairMetrics:
    purity: float
    biphoton_probability: float
    biphoton_probability_quadrature: float
    single_probability_s: float
    single_probability_i: float
    heralding_s: float
    heralding_i: float
    linewidth_s: float
    linewidth_i: float
    window_fraction: float
    degenerate: bool = False

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def pair_metrics(jsf: JointSpectralFunction, quadrature_nodes: int = QUADRATURE_NODES) -> PairMetrics:
    """Purity, pair/single probabilities, heralding efficiencies and linewidths.

    ``biphoton_probability`` is the closed form (infinite pump bandwidth);
    ``biphoton_probability_quadrature`` integrates ``|J|^2`` with the JSF's
    own pump. ``window_fraction`` is the share of the quadrature value that
    falls inside the JSF's finite axes (Lorentzian tails decay only as
    ``1/w^2``, so this is noticeably below 1 for +-50 gamma axes).
    """
    if jsf.provenance is not Provenance.DUAL_CAVITY:
        raise ParameterError("pair metrics are defined for the dual-cavity JSF")
    cs, ci = jsf.record["cavity_s"], jsf.record["cavity_i"]
    pump = jsf.record["pump"]
    eta = jsf.coupling
    p_si = pair_probability_closed_form(cs, ci, eta)
    p_quad = pair_probability_quadrature(cs, ci, pump, eta, quadrature_nodes)
    r_s, r_i = heralding_closed_form(ci), heralding_closed_form(cs)
    if eta == 0:
        return PairMetrics(float("nan"), 0.0, 0.0, 0.0, 0.0, float("nan"), float("nan"),
                           cs.linewidth, ci.linewidth, float("nan"), degenerate=True)
    window = float(np.sum(np.abs(jsf.values) ** 2) * jsf.axis_s.spacing * jsf.axis_i.spacing)
    return PairMetrics(
        purity=jsf_purity(jsf),
        biphoton_probability=p_si,
        biphoton_probability_quadrature=p_quad,
        single_probability_s=p_si / r_s,
        single_probability_i=p_si / r_i,
        heralding_s=r_s,
        heralding_i=r_i,
        linewidth_s=cs.linewidth,
        linewidth_i=ci.linewidth,
        window_fraction=window / p_quad,
    )


@dataclass(frozen=True)
class SqueezerOutputs:
    """Bogoliubov pair ``A_out = cosh(r) A_in - sinh(r) A_bar_in^dag`` with ``r = sqrt(2pi) eta``,
    and the weak-pumping state ``sqrt(1 - 2pi eta^2)|vac> - sqrt(2pi) eta |1,1>``."""

    cosh: float
    sinh: float
    vacuum_amplitude: float
    pair_amplitude: float
    pair_probability: float
    truncation_valid: bool


def squeezer_outputs(eta: float) -> SqueezerOutputs:
    if eta < 0:
        raise ParameterError("eta must be non-negative")
    r = np.sqrt(2 * np.pi) * eta
    p = 2 * np.pi * eta**2
    valid = p < 1
    return SqueezerOutputs(float(np.cosh(r)), float(np.sinh(r)),
                           float(np.sqrt(1 - p)) if valid else float("nan"),
                           float(-r), float(p), bool(valid))


@dataclass(frozen=True)
class FeasibilityReport:
    satisfied: bool
    finesse: float
    lower_bound: float
    upper_bound: float
    lower_margin: float
    upper_margin: float
    fsr_exceeds_spdc: bool


def feasibility_window(cavity: CavityParams, spdc_bandwidth: float,
                       phase_matching_bandwidth: float) -> FeasibilityReport:
    """Check ``Omega_SPDC / F < gamma < Omega_PM`` and ``Omega_FSR > Omega_SPDC``.

    Margins are ratios; both exceed 1 when the window is satisfied.
    """
    if cavity.fsr is None:
        raise ParameterError("feasibility check needs the cavity free spectral range")
    if not (spdc_bandwidth > 0 and phase_matching_bandwidth > 0):
        raise ParameterError("bandwidths must be positive")
    finesse = cavity.finesse
    lower = spdc_bandwidth / finesse
    fsr_ok = cavity.fsr > spdc_bandwidth
    inside = lower < cavity.gamma < phase_matching_bandwidth
    return FeasibilityReport(bool(inside and fsr_ok), finesse, lower, phase_matching_bandwidth,
                             cavity.gamma / lower, phase_matching_bandwidth / cavity.gamma,
                             bool(fsr_ok))


def loss_curves(iota_over_gamma) -> dict:
    """Closed-form loss dependence for equal relative loss in both arms, each
    normalized to its lossless value."""
    x = np.asarray(iota_over_gamma, dtype=float)
    return {
        "iota_over_gamma": x,
        "linewidth": 1 + x,
        "pair_rate": 1 / (1 + x) ** 2,
        "heralding": 1 / (1 + x),
    }


def default_axis(gamma: float, n_points: int = 512, span_in_linewidths: float = 50.0) -> ContinuousAxis:
    return ContinuousAxis(0.0, span_in_linewidths * gamma, n_points)


def schmidt_of(jsf: JointSpectralFunction) -> SchmidtDecomposition:
    return schmidt(jsf.values)
