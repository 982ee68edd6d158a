"""Schmidt (singular-value) decomposition of joint spectra and transfer blocks."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError, ParameterError


@dataclass(frozen=True, eq=False)
class SchmidtDecomposition:
    """``matrix = modes_row @ diag(singular_values) @ modes_col.T``.

    Column ``k`` of ``modes_row`` is the output-side mode ``psi_k``; column
    ``k`` of ``modes_col`` is the input-side coefficient vector ``phi_k``, so
    ``matrix[n, m] = sum_k lambda_k psi_k[n] phi_k[m]`` without conjugation.
    """

    singular_values: np.ndarray
    modes_row: np.ndarray
    modes_col: np.ndarray
    source_norm: float

    def reconstruct(self) -> np.ndarray:
        return (self.modes_row * self.singular_values) @ self.modes_col.T

    @property
    def schmidt_number(self) -> float:
        w = self.singular_values**2
        return float(w.sum() ** 2 / np.sum(w**2))


def schmidt(matrix) -> SchmidtDecomposition:
    values = getattr(matrix, "values", matrix)
    values = np.asarray(values, dtype=complex)
    if values.ndim != 2:
        raise DataError("Schmidt decomposition needs a 2-D matrix")
    if not np.all(np.isfinite(values)):
        raise DataError("matrix contains NaN or Inf entries")
    u, s, vh = np.linalg.svd(values, full_matrices=False)
    return SchmidtDecomposition(s, u, vh.T, float(np.linalg.norm(values)))


def purity(sd: SchmidtDecomposition) -> float:
    """``Tr(rho^2) = sum lambda^4 / (sum lambda^2)^2`` of either reduced state."""
    w = sd.singular_values**2
    total = w.sum()
    if total == 0:
        raise ParameterError("purity is undefined for an all-zero matrix")
    return float(np.sum(w**2) / total**2)
