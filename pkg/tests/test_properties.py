"""Property-based checks of the transform pair, closed forms and transfer invariants."""

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from resonator_modes import csfg, mqpg
from resonator_modes.csfg import QpgParams
from resonator_modes.grid import from_time_domain, make_grid, reverse_bins, to_time_domain
from resonator_modes.pump import constant_pump, hermite_gauss_pump, random_flat_pump
from resonator_modes.schmidt import purity, schmidt

even_sizes = st.integers(1, 32).map(lambda k: 2 * k)
windows = st.floats(0.1, 20.0)
rates = st.floats(1e-3, 10.0)


def _vec(seed, n):
    r = np.random.default_rng(seed)
    return r.normal(size=n) + 1j * r.normal(size=n)


@given(windows, even_sizes, st.integers(0, 2**32 - 1))
def test_transform_round_trip(T, N, seed):
    g = make_grid(T, N)
    X = _vec(seed, N)
    x = to_time_domain(g, X)
    assert np.allclose(from_time_domain(g, x), X, atol=1e-10)
    assert np.isclose(np.sum(np.abs(x) ** 2) * g.dt, np.sum(np.abs(X) ** 2), rtol=1e-10)


@given(even_sizes, st.integers(0, 2**32 - 1))
def test_reverse_bins_involution(N, seed):
    g = make_grid(1.0, N)
    X = _vec(seed, N)
    assert np.array_equal(reverse_bins(g, reverse_bins(g, X)), X)


@given(st.integers(1, 12), st.integers(1, 12), st.integers(0, 2**32 - 1))
def test_purity_bounds(a, b, seed):
    A = _vec(seed, a * b).reshape(a, b)
    p = purity(schmidt(A))
    assert 1 / min(a, b) - 1e-12 <= p <= 1 + 1e-12


@given(st.integers(-500, 500), rates, st.floats(0.0, 5.0), st.floats(0.0, 1.0), windows)
def test_flat_coefficients_conserve_energy(n, gamma, eta, iota_frac, T):
    g = make_grid(T, 2)
    p = QpgParams(g, gamma, eta, constant_pump(g), iota_frac * gamma)
    mu, nu = csfg.flat_pump_coefficients(n, p)
    ups = csfg.flat_bath_coefficient(n, p)
    assert np.isclose(abs(mu) ** 2 + abs(nu) ** 2 + abs(ups) ** 2, 1, atol=1e-12)


@given(rates, st.floats(0.0, 5.0), st.floats(0.0, 1.0), windows)
def test_lossy_coefficients_conserve_energy(gamma, eta, iota_frac, T):
    g = make_grid(T, 2)
    p = QpgParams(g, gamma, eta, constant_pump(g), iota_frac * gamma)
    mu, nu, ups = csfg.lossy_coefficients(p)
    assert np.isclose(mu**2 + nu**2 + ups**2, 1, atol=1e-12)


@given(st.floats(1e-3, 10.0), st.floats(0.0, 1.0))
def test_lossy_ce_peak(gamma, x):
    g = make_grid(1.0, 2)
    peak = np.sqrt((1 + x) * gamma)
    ce = lambda eta: csfg.lossy_coefficients(QpgParams(g, gamma, eta, constant_pump(g), x * gamma))[0] ** 2  # noqa: E731
    assert np.isclose(ce(peak), 1 / (1 + x), atol=1e-12)
    assert ce(0.9 * peak) <= ce(peak) and ce(1.1 * peak) <= ce(peak)


@given(st.floats(0.0, 20.0), st.floats(0.0, 20.0))
def test_prefactor_series(gT, eta2):
    x = (gT + eta2) / 2
    if x < 1e-6:
        return
    g = make_grid(1.0, 8)
    p = QpgParams(g, max(gT, 1e-300), np.sqrt(eta2), constant_pump(g))
    A = csfg.kernel_prefactor_A(p)
    assert A > 0
    assert np.isclose(A, 1 / np.expm1(x), rtol=1e-10)


@settings(max_examples=25, deadline=None)
@given(st.floats(1e-3, 0.2), st.floats(0.1, 1.5), st.integers(2, 16), st.integers(0, 1000))
def test_kernel_unitary_for_random_pumps(ratio, eta_factor, M, seed):
    g = make_grid(1.0, 32)
    pump = random_flat_pump(g, M, seed)
    base = csfg.matched_params(g, ratio, pump)
    p = QpgParams(g, base.gamma, eta_factor * base.eta, pump)
    tp = csfg.kernel_transfer(p, check=False)
    # rows can only lose norm to out-of-grid signal bins
    gram = tp.row_gram()
    assert np.all(np.diag(gram).real <= 1 + 1e-10)
    assert np.linalg.eigvalsh(np.eye(32) - gram).min() > -1e-10


@settings(max_examples=25, deadline=None)
@given(st.floats(1e-3, 0.3), st.floats(0.0, 1.0), st.integers(0, 2))
def test_kernel_lossy_deficit_psd(ratio, iota_frac, order):
    g = make_grid(1.0, 32)
    pump = hermite_gauss_pump(g, order, 2 * g.bin_spacing)
    tp = csfg.kernel_transfer(csfg.matched_params(g, ratio, pump, iota_frac), check=False)
    assert tp.deficit_min_eigenvalue() > -1e-10


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_multiport_energy_bookkeeping(seed):
    g = make_grid(1.0, 64)
    from resonator_modes.pump import mqpg_pump_set

    cfg = mqpg.matched_config(g, 0.05, mqpg_pump_set(g, [0, 1, 2, 3], 3 * g.bin_spacing))
    U = mqpg.build_multiport(cfg)
    s = _vec(seed, 64)
    s /= np.linalg.norm(s)
    assert np.sum(np.abs(U.apply(s)) ** 2) <= 1 + 1e-10


@given(st.floats(1e-2, 1e7), st.floats(0.0, 1.0))
def test_finesse_capacity_floor(F, ratio):
    n = csfg.finesse_capacity(F, ratio)
    assert n >= 0 and n <= F * ratio * (1 + 1e-9) + 1e-9
    assert n + 1 > F * ratio * (1 - 1e-9)
