"""Cavity-enhanced sum-frequency generation as a quantum pulse gate.

The idler cavity mode obeys

    db/dt = -kappa(t) b - eta beta(t) a_s(t) - sqrt(gamma) a_i(t) - sqrt(iota) d(t),
    kappa(t) = (gamma + iota)/2 + (eta^2/2) |beta(t)|^2,

on ``[-T/2, T/2]`` with ``b(T/2) = b(-T/2)``, and the idler output is
``a_out = a_in + sqrt(gamma) b``. Transfer matrices map input frequency bins
to idler output bins: ``a_out(w_n) = sum_m G_s[n, m] a_s(w_m) + G_i[n, m] a_i(w_m)``
(+ ``G_d`` for the loss bath).

Four routes produce a :class:`TransferPair`:

* ``perturbative_transfer``: weak-coupling closed form (rho_n coefficients).
* ``flat_transfer``: exact closed form for ``|beta(t)|^2 = 1/T``.
* ``kernel_transfer``: the Green's-function kernel ``g_j(t, t')``
  integrated exactly (see :func:`kernel_transfer`).
* ``ode_oracle`` (in :mod:`resonator_modes.oracle`): brute-force RK4.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import NumericalResolutionError, ParameterError
from .grid import FrequencyGrid, reverse_bins, temporal_overlap, to_time_domain
from .pump import PumpKind, PumpProfile, check_normalized
from .schmidt import SchmidtDecomposition, schmidt

PERTURBATIVE_WARN = 0.3
# Signal bins just outside the grid leak into the edge rows, leaving a residual
# of about 2.5e-4 (gamma/dw)^2 at N = 100; this bound covers gamma/dw <= 0.2.
UNITARITY_TOLERANCE = 1e-5


@dataclass(frozen=True, eq=False)
class QpgParams:
    grid: FrequencyGrid
    gamma: float
    eta: float
    pump: PumpProfile
    internal_loss: float = 0.0

    def __post_init__(self):
        if not self.gamma > 0:
            raise ParameterError("gamma must be positive")
        if self.eta < 0 or self.internal_loss < 0:
            raise ParameterError("eta and internal_loss must be non-negative")
        if self.pump.grid != self.grid:
            raise ParameterError("pump must be defined on the QPG grid")

    @property
    def gamma_over_dw(self) -> float:
        return self.gamma / self.grid.bin_spacing

    @property
    def total_rate(self) -> float:
        return self.gamma + self.internal_loss

    @property
    def mean_damping(self) -> float:
        """Time average of ``kappa(t)``."""
        T = self.grid.window_T
        return self.total_rate / 2 + self.eta**2 * self.pump.norm() / (2 * T)


def matched_params(grid: FrequencyGrid, gamma_over_dw: float, pump: PumpProfile,
                   iota_over_gamma: float = 0.0) -> QpgParams:
    """Parameters on the full-conversion line ``eta = sqrt((gamma + iota) T)``."""
    gamma = gamma_over_dw * grid.bin_spacing
    iota = iota_over_gamma * gamma
    eta = np.sqrt((gamma + iota) * grid.window_T)
    return QpgParams(grid, gamma, eta, pump, iota)


class Method(enum.Enum):
    KERNEL = "kernel"
    FLAT_ANALYTIC = "flat"
    PERTURBATIVE = "perturbative"
    ODE_ORACLE = "oracle"
    KERNEL_LATTICE = "kernel_lattice"


@dataclass(frozen=True, eq=False)
class TransferPair:
    G_s: np.ndarray
    G_i: np.ndarray
    params: QpgParams
    method: Method
    G_d: np.ndarray | None = None

    def row_gram(self) -> np.ndarray:
        """``G_s G_s^dag + G_i G_i^dag``; the identity for a lossless, untruncated map."""
        return self.G_s @ self.G_s.conj().T + self.G_i @ self.G_i.conj().T

    def unitarity_residual(self) -> float:
        """``||G_s G_s^dag + G_i G_i^dag - I||_F / sqrt(N)``."""
        N = self.G_s.shape[0]
        return float(np.linalg.norm(self.row_gram() - np.eye(N)) / np.sqrt(N))

    def deficit_min_eigenvalue(self) -> float:
        """Smallest eigenvalue of ``I - G_s G_s^dag - G_i G_i^dag`` (>= 0 up to rounding with loss)."""
        N = self.G_s.shape[0]
        deficit = np.eye(N) - self.row_gram()
        return float(np.linalg.eigvalsh((deficit + deficit.conj().T) / 2).min())

    def stacked(self) -> np.ndarray:
        return np.hstack([self.G_s, self.G_i])


def relative_deviation(a: TransferPair, b: TransferPair) -> float:
    """Frobenius norm of the difference of ``[G_s | G_i]`` relative to ``b``."""
    return float(np.linalg.norm(a.stacked() - b.stacked()) / np.linalg.norm(b.stacked()))


# --- weak-coupling and flat-pump closed forms ---------------------------------

def perturbative_rho(n, params: QpgParams):
    """``rho_n = eta sqrt(gamma/T) / (i w_n - gamma/2)``."""
    T = params.grid.window_T
    omega = np.asarray(n) * params.grid.bin_spacing
    rho = params.eta * np.sqrt(params.gamma / T) / (1j * omega - params.gamma / 2)
    rho0 = 2 * params.eta / np.sqrt(params.gamma * T)
    if rho0 > PERTURBATIVE_WARN:
        warnings.warn(f"|rho_0| = {rho0:.3f} exceeds {PERTURBATIVE_WARN}; "
                      "the weak-coupling solution is unreliable here", stacklevel=2)
    return rho


def perturbative_separability(params: QpgParams) -> float:
    """``sin^2|rho_0| / sum_n sin^2|rho_n|`` over the grid bins."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        s2 = np.sin(np.abs(perturbative_rho(params.grid.indices, params))) ** 2
    return float(s2[params.grid.zero_index] / s2.sum())


def pump_shift_matrix(pump: PumpProfile, periodic: bool = True) -> np.ndarray:
    """``B[n, m] = beta(w_{n-m})``, so that ``(B a)_n`` is the mode ``A_s(n)``.

    With ``periodic=True`` the bin difference is taken modulo ``N`` and every
    row is a permutation of the pump spectrum (unit norm); otherwise shifts
    that leave the grid are dropped.
    """
    grid = pump.grid
    N = grid.n_modes
    diff = grid.indices[:, None] - grid.indices[None, :]
    if periodic:
        pos = (diff + N // 2) % N
        return pump.spectral[pos]
    pos = diff + N // 2
    inside = (pos >= 0) & (pos < N)
    return np.where(inside, pump.spectral[np.clip(pos, 0, N - 1)], 0)


def perturbative_transfer(params: QpgParams, phases: bool = False) -> TransferPair:
    """Weak-coupling transfer: ``G_i = diag(cos|rho_n|)``, ``G_s = diag(sin|rho_n|) B``.

    ``phases=False`` gives the phase-absorbed form. ``phases=True`` keeps
    the cavity phases, ``exp(i theta_n)`` on ``G_i`` and ``rho_n/|rho_n|`` on
    ``G_s``, which is what the exact solutions reduce to at small ``eta``.
    """
    check_normalized(params.pump)
    if params.internal_loss:
        raise ParameterError("the perturbative solution is lossless")
    n = params.grid.indices
    rho = perturbative_rho(n, params)
    mag = np.abs(rho)
    cos, sin = np.cos(mag), np.sin(mag)
    if phases:
        omega = n * params.grid.bin_spacing
        theta = (1j * omega + params.gamma / 2) / (1j * omega - params.gamma / 2)
        cos = cos * theta
        sin = sin * np.where(mag > 0, rho / np.where(mag > 0, mag, 1), 1)
    G_s = sin[:, None] * pump_shift_matrix(params.pump)
    return TransferPair(G_s, np.diag(cos).astype(complex), params, Method.PERTURBATIVE)


def flat_pump_coefficients(n, params: QpgParams):
    """``(mu_n, nu_n)`` of ``a_out(w_n) = mu_n A_s(n) + nu_n a_i(w_n)`` for ``|beta|^2 = 1/T``.

    With internal loss the damping becomes ``(gamma + iota)/2 + eta^2/2T`` and
    ``nu_n`` gains ``-iota/2`` in its numerator; the bath coefficient is
    :func:`flat_bath_coefficient`.
    """
    T = params.grid.window_T
    omega = np.asarray(n) * params.grid.bin_spacing
    denom = 1j * omega - params.total_rate / 2 - params.eta**2 / (2 * T)
    mu = params.eta * np.sqrt(params.gamma / T) / denom
    nu = (1j * omega + (params.gamma - params.internal_loss) / 2 - params.eta**2 / (2 * T)) / denom
    return mu, nu


def flat_bath_coefficient(n, params: QpgParams):
    T = params.grid.window_T
    omega = np.asarray(n) * params.grid.bin_spacing
    denom = 1j * omega - params.total_rate / 2 - params.eta**2 / (2 * T)
    return np.sqrt(params.gamma * params.internal_loss) / denom


def flat_transfer(params: QpgParams) -> TransferPair:
    """Closed-form transfer for a flat pump (constant or random-flat)."""
    if params.pump.kind not in (PumpKind.CONSTANT, PumpKind.RANDOM_FLAT):
        raise ParameterError("the flat-pump solution requires a constant or random-flat pump")
    n = params.grid.indices
    mu, nu = flat_pump_coefficients(n, params)
    G_s = mu[:, None] * pump_shift_matrix(params.pump)
    G_d = np.diag(flat_bath_coefficient(n, params)) if params.internal_loss else None
    return TransferPair(G_s, np.diag(nu), params, Method.FLAT_ANALYTIC, G_d)


def lossy_coefficients(params: QpgParams, literal_bath: bool = False):
    """Zero-bin coefficients ``(mu0'', nu0'', upsilon0'')`` in the ``eta ~ sqrt((gamma+iota)T) -> 0`` limit.

    ``|mu|^2 + |nu|^2 + |upsilon|^2 = 1`` requires the bath coefficient
    ``-2 T sqrt(gamma iota) / ((gamma + iota) T + eta^2)``. ``literal_bath=True``
    returns the variant without the factor ``T``, which only satisfies the
    identity when ``T = 1``.
    """
    T = params.grid.window_T
    g, i, eta = params.gamma, params.internal_loss, params.eta
    denom = g * T + i * T + eta**2
    mu = -2 * eta * np.sqrt(g * T) / denom
    nu = (eta**2 - g * T + i * T) / denom
    upsilon = -2 * np.sqrt(g * i) / denom
    if not literal_bath:
        upsilon *= T
    return mu, nu, upsilon


def finesse_capacity(finesse: float, gamma_over_dw_target: float = 0.1) -> int:
    """Largest bin count ``floor(F * gamma/dw)`` a target mode may span while the pump stays below one FSR."""
    if not finesse > 0:
        raise ParameterError("finesse must be positive")
    if gamma_over_dw_target < 0:
        raise ParameterError("gamma/dw must be non-negative")
    # the small offset guards floor against products like 0.29 * 100 = 28.999999999999996
    value = finesse * gamma_over_dw_target
    return int(np.floor(value + 1e-9 * max(1.0, value)))


# --- Green's-function kernel --------------------------------------------------

def kernel_prefactor_A(params: QpgParams) -> float:
    """``A = exp(-x) / (1 - exp(-x))`` with ``x = integral kappa dt = ((gamma+iota) T + eta^2)/2``."""
    x = params.mean_damping * params.grid.window_T
    if x <= 0:
        raise ParameterError("gamma T + eta^2 must be positive")
    return float(np.exp(-x) / -np.expm1(-x))


class KernelModel:
    """Sampled ingredients of ``g_j(t, t') = -[A + u(t - t')] h_j(t') exp(F(t) - F(t'))``.

    ``F(t) = -integral_{-T/2}^t kappa`` is split as ``-kbar (t + T/2) - phi(t)``
    with ``kbar`` the mean damping and ``phi`` periodic. ``|beta|^2`` is a
    trigonometric polynomial, so ``phi`` follows from its Fourier series
    exactly rather than from a cumulative quadrature.
    """

    def __init__(self, params: QpgParams):
        self.params = params
        grid = params.grid
        self.T = grid.window_T
        self.kbar = params.mean_damping
        self.A = kernel_prefactor_A(params)
        beta = params.pump.spectral
        # |beta(t)|^2 = sum_d c_d exp(-i d dw t),  c_d = (1/T) sum_a beta_a conj(beta_{a-d})
        corr = np.correlate(beta, beta, mode="full") / self.T
        self.lags = np.arange(-(grid.n_modes - 1), grid.n_modes)
        self.intensity_coeffs = corr
        nz = self.lags != 0
        self.phi_lags = self.lags[nz]
        self.phi_coeffs = params.eta**2 / 2 * corr[nz] / (-1j * self.phi_lags * grid.bin_spacing)
        # phi(-T/2) = 0 fixes the constant term
        self.phi_offset = -np.sum(self.phi_coeffs * np.exp(1j * self.phi_lags * np.pi))

    def phi(self, t):
        t = np.asarray(t, dtype=float)
        dw = self.params.grid.bin_spacing
        phase = np.exp(-1j * np.multiply.outer(t, self.phi_lags * dw))
        return (phase @ self.phi_coeffs + self.phi_offset).real

    def intensity(self, t):
        t = np.asarray(t, dtype=float)
        dw = self.params.grid.bin_spacing
        return (np.exp(-1j * np.multiply.outer(t, self.lags * dw)) @ self.intensity_coeffs).real

    def F(self, t):
        t = np.asarray(t, dtype=float)
        return -self.kbar * (t + self.T / 2) - self.phi(t)

    def drive(self, t, leg: str):
        t = np.asarray(t, dtype=float)
        p = self.params
        if leg == "s":
            grid = p.grid
            beta_t = np.exp(-1j * np.multiply.outer(t, grid.omegas)) @ p.pump.spectral / np.sqrt(self.T)
            return p.eta * beta_t
        if leg == "i":
            return np.full(t.shape, np.sqrt(p.gamma), dtype=complex)
        if leg == "d":
            return np.full(t.shape, np.sqrt(p.internal_loss), dtype=complex)
        raise ParameterError(f"leg must be 's', 'i' or 'd', got {leg!r}")


def kernel_g(t, t_prime, leg: str, params: QpgParams, model: KernelModel | None = None):
    """Kernel ``g_j(t, t')`` with the right-continuous step ``u(0) = 1``."""
    model = model or KernelModel(params)
    t = np.asarray(t, dtype=float)
    t_prime = np.asarray(t_prime, dtype=float)
    half = params.grid.window_T / 2
    if np.any(np.abs(t) > half * (1 + 1e-12)) or np.any(np.abs(t_prime) > half * (1 + 1e-12)):
        raise ParameterError("kernel arguments must lie in [-T/2, T/2]")
    step = np.where(t - t_prime >= 0, 1.0, 0.0)
    return -(model.A + step) * model.drive(t_prime, leg) * np.exp(model.F(t) - model.F(t_prime))


def _fourier_coeffs(samples: np.ndarray, T: float):
    """Coefficients ``c_k`` of ``x(t) = sum_k c_k exp(-i k dw t)`` from samples on ``[-T/2, T/2)``."""
    L = samples.shape[-1]
    k = np.arange(-L // 2, L // 2)
    c = np.fft.fftshift(np.fft.ifft(samples, axis=-1), axes=-1)
    return k, c * np.where(k % 2 == 0, 1.0, -1.0)


def kernel_transfer(params: QpgParams, oversample: int = 8, check: bool = True,
                    tolerance: float = UNITARITY_TOLERANCE) -> TransferPair:
    """Transfer matrices from the exact double Fourier transform of the kernel.

    Because ``exp(f(t, t')) = exp(F(t)) exp(-F(t'))`` factorizes, the
    ``(1/T) double integral`` of each kernel term is a closed-form sum over
    the Fourier coefficients ``p_k`` of ``exp(-phi)`` and ``q_l`` of
    ``h_j exp(phi)``. The ``A``-term cancels the rank-one part of the step
    term exactly, leaving

        g~_j(n, m) = -sum_a p_{n-a} q_{a-m} / (kbar - i w_a).

    ``oversample`` sets the lattice (``oversample * N`` points) on which
    ``exp(+-phi)`` is expanded; its coefficients decay super-exponentially.

    With ``check`` on, a lossless result whose unitarity residual exceeds
    ``tolerance`` raises :class:`NumericalResolutionError`; a lossy one must
    leave a positive-semidefinite deficit.
    """
    check_normalized(params.pump)
    grid = params.grid
    model = KernelModel(params)
    T = grid.window_T
    L = max(64, oversample * grid.n_modes)
    t = -T / 2 + T / L * np.arange(L)
    phi = model.phi(t)
    k, p = _fourier_coeffs(np.exp(-phi), T)
    legs = ["s", "i"] + (["d"] if params.internal_loss else [])
    q = {leg: _fourier_coeffs(model.drive(t, leg) * np.exp(phi), T)[1] for leg in legs}

    N = grid.n_modes
    a = np.arange(-N // 2 - L // 2, N // 2 + L // 2)
    inv = 1.0 / (model.kbar - 1j * a * grid.bin_spacing)
    n = grid.indices

    def shift(coeffs, idx):
        pos = idx + L // 2
        inside = (pos >= 0) & (pos < L)
        return np.where(inside, coeffs[np.clip(pos, 0, L - 1)], 0)

    P = shift(p, n[:, None] - a[None, :])
    out = {}
    for leg in legs:
        Q = shift(q[leg], a[:, None] - n[None, :])
        out[leg] = -np.sqrt(params.gamma) * (P * inv) @ Q
    tp = TransferPair(out["s"], out["i"] + np.eye(N), params, Method.KERNEL, out.get("d"))
    if check:
        verify_unitarity(tp, tolerance)
    return tp


def verify_unitarity(tp: TransferPair, tolerance: float = UNITARITY_TOLERANCE) -> None:
    if tp.params.internal_loss == 0:
        res = tp.unitarity_residual()
        if res > tolerance:
            raise NumericalResolutionError(
                f"unitarity residual {res:.2e} exceeds {tolerance:.0e}; increase n_modes "
                "(or the window) so the converted band stays clear of the grid edge")
    else:
        low = tp.deficit_min_eigenvalue()
        if low < -tolerance:
            raise NumericalResolutionError(f"lossy deficit has negative eigenvalue {low:.2e}")


def kernel_transfer_lattice(params: QpgParams, oversample: int = 1) -> TransferPair:
    """Midpoint-lattice double DFT of the sampled kernel (``M = oversample * N`` points per axis).

    First-order accurate because of the step at ``t = t'``; kept as a
    cross-check of :func:`kernel_transfer` and to show its convergence.
    """
    grid = params.grid
    model = KernelModel(params)
    T = grid.window_T
    M = oversample * grid.n_modes
    t = -T / 2 + T / M * (np.arange(M) + 0.5)
    w = T / M
    fwd = np.exp(1j * np.outer(grid.omegas, t))       # e^{i w_n t}
    back = np.exp(-1j * np.outer(t, grid.omegas))     # e^{-i w_m t'}
    legs = ["s", "i"] + (["d"] if params.internal_loss else [])
    out = {}
    for leg in legs:
        g = kernel_g(t[:, None], t[None, :], leg, params, model)
        out[leg] = np.sqrt(params.gamma) * (fwd @ g @ back) * w * w / T
    return TransferPair(out["s"], out["i"] + np.eye(grid.n_modes), params,
                        Method.KERNEL_LATTICE, out.get("d"))


# --- metrics ------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class QpgMetrics:
    separability: float
    conversion_efficiency: float
    fidelity_to_pump: float
    schmidt: SchmidtDecomposition

    def as_dict(self) -> dict:
        return {"separability": self.separability,
                "conversion_efficiency": self.conversion_efficiency,
                "fidelity_to_pump": self.fidelity_to_pump}


def target_mode_temporal(tp: TransferPair, sd: SchmidtDecomposition | None = None) -> np.ndarray:
    """Time-domain weighting ``f(t)`` with ``sum_m phi_0[m] a_s(w_m) = integral f(t) a_s(t) dt``."""
    sd = sd or schmidt(tp.G_s)
    grid = tp.params.grid
    return to_time_domain(grid, reverse_bins(grid, sd.modes_col[:, 0]))


def qpg_metrics(tp: TransferPair, pump: PumpProfile | None = None) -> QpgMetrics:
    """Separability ``l0^2 / sum l_k^2``, CE ``l0^2`` and pump fidelity ``|<f_0, beta>|^2``.

    The pump is the ideal weighting function: in the full-conversion limit
    the converted mode is ``integral beta(t) a_s(t) dt``.
    """
    pump = pump or tp.params.pump
    sd = schmidt(tp.G_s)
    w = sd.singular_values**2
    if w.sum() == 0:
        raise ParameterError("G_s vanishes; QPG metrics are undefined")
    grid = tp.params.grid
    f0 = target_mode_temporal(tp, sd)
    ov = temporal_overlap(grid, f0, pump.temporal)
    norm = temporal_overlap(grid, f0, f0).real * temporal_overlap(grid, pump.temporal, pump.temporal).real
    return QpgMetrics(float(w[0] / w.sum()), float(w[0]), float(abs(ov) ** 2 / norm), sd)


def transfer(params: QpgParams, method: Method | str = Method.KERNEL, **kwargs) -> TransferPair:
    method = Method(method)
    if method is Method.KERNEL:
        return kernel_transfer(params, **kwargs)
    if method is Method.FLAT_ANALYTIC:
        return flat_transfer(params)
    if method is Method.PERTURBATIVE:
        return perturbative_transfer(params, **kwargs)
    if method is Method.KERNEL_LATTICE:
        return kernel_transfer_lattice(params, **kwargs)
    from .oracle import ode_oracle
    return ode_oracle(params, **kwargs)
