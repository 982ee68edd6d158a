import numpy as np
import pytest

from resonator_modes.errors import ParameterError
from resonator_modes.grid import (
    ContinuousAxis,
    evaluate_series,
    from_time_domain,
    make_grid,
    refined_samples,
    reverse_bins,
    temporal_norm,
    temporal_overlap,
    to_time_domain,
)


def test_bins_and_spacing():
    g = make_grid(2.0, 8)
    assert g.bin_spacing == pytest.approx(np.pi)
    assert list(g.indices) == [-4, -3, -2, -1, 0, 1, 2, 3]
    assert g.zero_index == 4
    assert g.position(0) == 4
    assert g.sample_times[0] == -1.0
    assert g.dt == pytest.approx(0.25)


@pytest.mark.parametrize("T, N", [(0.0, 8), (-1.0, 8), (1.0, 7), (1.0, 0), (np.inf, 8)])
def test_invalid_grids(T, N):
    with pytest.raises(ParameterError):
        make_grid(T, N)


def test_position_out_of_range():
    with pytest.raises(IndexError):
        make_grid(1.0, 8).position(4)


def test_single_bin_is_plane_wave():
    g = make_grid(3.0, 16)
    X = np.zeros(16, complex)
    X[g.position(2)] = 1.0
    x = to_time_domain(g, X)
    expected = np.exp(-1j * 2 * g.bin_spacing * g.sample_times) / np.sqrt(g.window_T)
    assert np.allclose(x, expected, atol=1e-14)
    assert np.allclose(evaluate_series(g, X, g.sample_times), expected, atol=1e-14)


def test_round_trip_and_parseval(rng):
    g = make_grid(1.7, 64)
    X = rng.normal(size=64) + 1j * rng.normal(size=64)
    x = to_time_domain(g, X)
    assert np.allclose(from_time_domain(g, x), X, atol=1e-12)
    assert temporal_norm(g, x) == pytest.approx(np.sum(np.abs(X) ** 2), rel=1e-12)


def test_overlap_matches_spectral_inner_product(rng):
    g = make_grid(1.0, 32)
    A = rng.normal(size=32) + 1j * rng.normal(size=32)
    B = rng.normal(size=32) + 1j * rng.normal(size=32)
    ov = temporal_overlap(g, to_time_domain(g, A), to_time_domain(g, B))
    assert ov == pytest.approx(np.vdot(A, B), rel=1e-12)


def test_refined_samples_interpolate(rng):
    g = make_grid(1.0, 16)
    X = rng.normal(size=16) + 1j * rng.normal(size=16)
    fine = refined_samples(g, X, 4)
    t = -0.5 + np.arange(64) / 64
    assert np.allclose(fine, evaluate_series(g, X, t), atol=1e-12)
    assert np.allclose(fine[::4], to_time_domain(g, X), atol=1e-12)


def test_reverse_bins():
    g = make_grid(1.0, 6)
    X = np.arange(6.0)  # bins -3..2
    out = reverse_bins(g, X)
    assert list(out.real) == [0, 5, 4, 3, 2, 1]
    assert np.allclose(reverse_bins(g, out), X)


def test_length_mismatch():
    with pytest.raises(ParameterError):
        to_time_domain(make_grid(1.0, 8), np.zeros(6))


def test_continuous_axis():
    ax = ContinuousAxis(0.0, 5.0, 11)
    assert ax.spacing == pytest.approx(1.0)
    assert ax.points[0] == -5 and ax.points[-1] == 5
    with pytest.raises(ParameterError):
        ContinuousAxis(0.0, 0.0, 11)
    with pytest.raises(ParameterError):
        ContinuousAxis(0.0, 1.0, 1)
