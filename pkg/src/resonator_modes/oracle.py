"""Brute-force RK4 solution of the cavity equation, used as an independent check."""

from __future__ import annotations

import numpy as np

from .csfg import KernelModel, Method, QpgParams, TransferPair
from .errors import ConvergenceError
from .grid import refined_samples


def _integrate(params: QpgParams, steps_per_sample: int) -> TransferPair:
    grid = params.grid
    N, T = grid.n_modes, grid.window_T
    S = steps_per_sample * N
    h = T / S
    # half-step lattice for RK4 stage times
    beta = refined_samples(grid, params.pump.spectral, 2 * steps_per_sample)
    beta = np.append(beta, beta[0])
    kappa = params.total_rate / 2 + params.eta**2 / 2 * np.abs(beta) ** 2
    legs = [params.eta, np.sqrt(params.gamma)] + ([np.sqrt(params.internal_loss)] if params.internal_loss else [])
    n_legs = len(legs)
    w = grid.omegas
    sqrtT = np.sqrt(T)

    def drive(j):
        t = -T / 2 + j * h / 2
        basis = np.exp(-1j * w * t) / sqrtT
        parts = [legs[0] * beta[j] * basis] + [c * basis for c in legs[1:]]
        return np.concatenate(parts + [np.zeros(1)])

    # columns: n_legs * N particular solutions, then the homogeneous one
    y = np.zeros(n_legs * N + 1, dtype=complex)
    y[-1] = 1.0
    acc = np.zeros((N, y.size), dtype=complex)
    for step in range(S):
        j = 2 * step
        t = -T / 2 + step * h
        acc += np.outer(np.exp(1j * w * t), y)
        d0, d1, d2 = drive(j), drive(j + 1), drive(j + 2)
        k1 = -kappa[j] * y - d0
        k2 = -kappa[j + 1] * (y + h / 2 * k1) - d1
        k3 = -kappa[j + 1] * (y + h / 2 * k2) - d1
        k4 = -kappa[j + 2] * (y + h * k3) - d2
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    acc *= h / sqrtT
    # periodic boundary: b = b_p + b0 * Phi with b0 = b_p(T/2) / (1 - Phi(T/2))
    b0 = y[:-1] / (1 - y[-1])
    spectra = acc[:, :-1] + acc[:, -1:] * b0[None, :]
    blocks = [np.sqrt(params.gamma) * spectra[:, k * N:(k + 1) * N] for k in range(n_legs)]
    blocks[1] = blocks[1] + np.eye(N)
    return TransferPair(blocks[0], blocks[1], params, Method.ODE_ORACLE,
                        blocks[2] if n_legs == 3 else None)


def ode_oracle(params: QpgParams, start_steps: int = 64, max_steps: int = 4096,
               tolerance: float = 1e-8) -> TransferPair:
    """Integrate ``db/dt = -kappa b - drive`` for every input bin with classical RK4.

    The step count per sample doubles until two successive results agree to
    ``tolerance`` (max abs entry); the finer one is returned.
    """
    steps = start_steps
    prev = _integrate(params, steps)
    while steps < max_steps:
        steps *= 2
        cur = _integrate(params, steps)
        diff = np.max(np.abs(cur.stacked() - prev.stacked()))
        if diff < tolerance:
            return cur
        prev = cur
    raise ConvergenceError(f"RK4 step halving did not reach {tolerance:.0e} "
                           f"by {max_steps} steps per sample (last change {diff:.1e})")


__all__ = ["ode_oracle", "KernelModel"]
