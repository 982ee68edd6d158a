import numpy as np
import pytest

from resonator_modes.errors import OrthogonalityError, ParameterError, TruncationError
from resonator_modes.grid import ContinuousAxis, make_grid, temporal_norm
from resonator_modes.pump import (
    PumpKind,
    PumpSet,
    check_normalized,
    complete_hermite_set,
    complex_gaussians,
    constant_pump,
    default_width,
    hermite_gauss_pump,
    mqpg_pump_set,
    overlap,
    overlap_matrix,
    parse_pump_spec,
    pump_from_temporal,
    random_flat_pump,
    rectangular_pump,
    spectral_bandwidth,
)


def test_rectangular_pump_values():
    ax = ContinuousAxis(0.0, 5.0, 101)
    p = rectangular_pump(ax, 4.0)
    assert p.kind is PumpKind.RECTANGULAR
    assert np.all(p.spectral[np.abs(ax.points) <= 2.0] == 1)
    assert np.all(p.spectral[np.abs(ax.points) > 2.0] == 0)
    # evaluated off the axis too: the JSF needs beta(ws + wi)
    assert p.at(np.array([1.99, 2.01, 50.0])).real.tolist() == [1.0, 0.0, 0.0]


@pytest.mark.parametrize("bw", [0.0, -1.0, 0.15])
def test_rectangular_pump_rejects(bw):
    with pytest.raises(ParameterError):
        rectangular_pump(ContinuousAxis(0.0, 5.0, 101), bw)


def test_wide_rectangular_pump_allowed():
    p = rectangular_pump(ContinuousAxis(0.0, 5.0, 101), 1000.0)
    assert np.all(p.spectral == 1)


@pytest.mark.parametrize("order", [0, 1, 2, 3])
def test_hermite_gauss_unit_norm(grid100, order):
    p = hermite_gauss_pump(grid100, order, default_width(grid100))
    assert temporal_norm(grid100, p.temporal) == pytest.approx(1.0, abs=1e-12)
    check_normalized(p)


def test_hermite_gauss_on_axis_unit_integral():
    ax = ContinuousAxis(0.0, 1.0, 2001)
    p = hermite_gauss_pump(ax, 2, 0.1)
    assert p.norm() == pytest.approx(1.0, rel=1e-10)
    assert np.allclose(p.at(ax.points), p.spectral)


def test_hermite_gauss_orthogonal(grid100):
    w = default_width(grid100)
    a, b = hermite_gauss_pump(grid100, 0, w), hermite_gauss_pump(grid100, 2, w)
    assert abs(overlap(a, b)) < 1e-12


def test_hermite_gauss_truncation(grid100):
    with pytest.raises(TruncationError):
        hermite_gauss_pump(grid100, 2, 100 / 4 * grid100.bin_spacing)


@pytest.mark.parametrize("order, width", [(-1, 1.0), (1.5, 1.0), (1, 0.0)])
def test_hermite_gauss_bad_args(grid100, order, width):
    with pytest.raises(ParameterError):
        hermite_gauss_pump(grid100, order, width)


def test_default_width_clears_edge_up_to_order_four(grid100):
    for k in range(5):
        hermite_gauss_pump(grid100, k, default_width(grid100))


def test_constant_pump(grid32):
    p = constant_pump(grid32)
    assert np.allclose(p.temporal, 1 / np.sqrt(grid32.window_T))
    assert p.spectral[grid32.zero_index] == 1
    assert np.count_nonzero(p.spectral) == 1
    check_normalized(p)


def test_random_flat_reproducible(grid32):
    a = random_flat_pump(grid32, 16, 7)
    b = random_flat_pump(grid32, 16, 7)
    c = random_flat_pump(grid32, 16, 8)
    assert np.array_equal(a.spectral, b.spectral)
    assert not np.array_equal(a.spectral, c.spectral)
    assert np.count_nonzero(a.spectral) == 16
    check_normalized(a)


def test_complex_gaussians_statistics():
    z = complex_gaussians(0, 200_000)
    assert np.mean(np.abs(z) ** 2) == pytest.approx(1.0, abs=0.01)
    assert abs(np.mean(z)) < 0.01
    assert abs(np.mean(z**2)) < 0.01


def test_complex_gaussians_pinned_values():
    # guards the generator stream: PCG64 + SeedSequence + Box-Muller
    z = complex_gaussians(42, 3)
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(42)))
    u1, u2 = rng.random(3), rng.random(3)
    assert np.allclose(z, np.sqrt(-np.log1p(-u1)) * np.exp(2j * np.pi * u2))


@pytest.mark.parametrize("M", [0, 33, 2.5])
def test_random_flat_bad_M(grid32, M):
    with pytest.raises(ParameterError):
        random_flat_pump(grid32, M, 0)


def test_pump_from_temporal_normalizes(grid32, rng):
    x = rng.normal(size=32) + 1j * rng.normal(size=32)
    p = pump_from_temporal(grid32, x)
    check_normalized(p)


def test_with_phase(hg2_32):
    q = hg2_32.with_phase(0.7)
    assert np.allclose(q.spectral, hg2_32.spectral * np.exp(0.7j))
    assert q.norm() == pytest.approx(1.0)


def test_pump_set_orthogonality(grid100):
    ps = mqpg_pump_set(grid100, [0, 1, 2], default_width(grid100))
    assert len(ps) == 3
    assert np.allclose(overlap_matrix(ps.members), np.eye(3), atol=1e-12)
    with pytest.raises(OrthogonalityError):
        mqpg_pump_set(grid100, [0, 2, 2], default_width(grid100))
    g0 = hermite_gauss_pump(grid100, 0, default_width(grid100))
    g0b = hermite_gauss_pump(grid100, 0, 1.05 * default_width(grid100))
    with pytest.raises(OrthogonalityError):
        PumpSet((g0, g0b))


def test_pump_set_bandwidth_below_fsr(grid100):
    p = hermite_gauss_pump(grid100, 0, default_width(grid100))
    with pytest.raises(ParameterError):
        PumpSet((p,), fsr_offset=0.5 * spectral_bandwidth(p))
    PumpSet((p,), fsr_offset=2 * spectral_bandwidth(p))


def test_pump_set_mixed_grids(grid32, grid100):
    with pytest.raises(ParameterError):
        PumpSet((constant_pump(grid32), constant_pump(grid100)))


def test_complete_hermite_set_is_basis(grid32):
    ps = complete_hermite_set(grid32, 32, default_width(grid32))
    B = np.array([m.spectral for m in ps.members])
    assert np.allclose(B @ B.conj().T, np.eye(32), atol=1e-12)
    assert np.allclose(B.conj().T @ B, np.eye(32), atol=1e-12)
    # leading members agree with the analytic modes up to rounding
    direct = hermite_gauss_pump(grid32, 1, default_width(grid32))
    assert np.allclose(ps.members[1].spectral, direct.spectral, atol=1e-10)


def test_parse_pump_spec_dicts():
    assert parse_pump_spec("rect:2.5") == {"kind": "rect", "bandwidth": 2.5}
    assert parse_pump_spec("hg:2") == {"kind": "hg", "order": 2, "width": None}
    assert parse_pump_spec("hg:2:0.5")["width"] == 0.5
    assert parse_pump_spec("flat") == {"kind": "flat"}
    assert parse_pump_spec("random:8:3") == {"kind": "random", "M": 8, "seed": 3}
    assert parse_pump_spec("hgset:0,1,2")["orders"] == [0, 1, 2]


@pytest.mark.parametrize("spec", ["", "rect", "rect:x", "hg", "hg:a", "random:8", "tri:1", "flat:1"])
def test_parse_pump_spec_errors(spec):
    with pytest.raises(ParameterError):
        parse_pump_spec(spec)


def test_parse_pump_spec_objects(grid100):
    assert parse_pump_spec("flat", grid100).kind is PumpKind.CONSTANT
    assert parse_pump_spec("hg:1", grid100).params["width"] == default_width(grid100)
    assert isinstance(parse_pump_spec("hgset:0,1", grid100), PumpSet)
    with pytest.raises(ParameterError):
        parse_pump_spec("rect:1", grid100)
    with pytest.raises(ParameterError):
        parse_pump_spec("hg:1", ContinuousAxis(0, 1, 11))


def test_arrays_are_read_only(hg2_32):
    with pytest.raises(ValueError):
        hg2_32.spectral[0] = 1.0


def test_check_normalized_rejects_raw():
    p = rectangular_pump(ContinuousAxis(0.0, 5.0, 101), 4.0)
    with pytest.raises(ParameterError):
        check_normalized(p)
    g = make_grid(1.0, 8)
    with pytest.raises(ParameterError):
        check_normalized(pump_from_temporal(g, np.ones(8) * 3, normalize=False))
