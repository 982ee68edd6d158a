import numpy as np
import pytest

from resonator_modes.errors import DataError, ParameterError
from resonator_modes.schmidt import purity, schmidt


def test_reconstruction(rng):
    A = rng.normal(size=(64, 64)) + 1j * rng.normal(size=(64, 64))
    sd = schmidt(A)
    assert np.allclose(sd.reconstruct(), A, atol=1e-10)
    assert np.all(np.diff(sd.singular_values) <= 0)


def test_rank_one_is_pure(rng):
    u = rng.normal(size=20) + 1j * rng.normal(size=20)
    v = rng.normal(size=30)
    sd = schmidt(np.outer(u, v))
    assert purity(sd) == pytest.approx(1.0, abs=1e-12)
    assert sd.schmidt_number == pytest.approx(1.0, abs=1e-12)


def test_identity_purity():
    sd = schmidt(np.eye(5))
    assert purity(sd) == pytest.approx(0.2)
    assert sd.schmidt_number == pytest.approx(5.0)


def test_scale_invariance(rng):
    A = rng.normal(size=(8, 6))
    assert purity(schmidt(A)) == pytest.approx(purity(schmidt(3.7j * A)), rel=1e-12)


def test_bad_inputs():
    with pytest.raises(DataError):
        schmidt(np.zeros(4))
    with pytest.raises(DataError):
        schmidt(np.array([[1.0, np.nan], [0.0, 1.0]]))
    with pytest.raises(ParameterError):
        purity(schmidt(np.zeros((3, 3))))
