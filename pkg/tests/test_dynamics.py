"""Time evolution, phase-averaged amplitudes, escape blocks, l1 identity."""

import numpy as np
import pytest

from quasispec import (
    AmplitudeSeries,
    CapExceededError,
    ConfigError,
    LightConeError,
    ModelParams,
    StateVector,
    build_hamiltonian,
    density_of_states,
    dos_fourier_trace,
    eigendecompose,
    escape_block_maxima,
    evolve_chebyshev,
    evolve_exact,
    fourier,
    l1_decomposition_check,
    phase_averaged_amplitude,
    phase_partition,
    shift_state,
)
from quasispec.dynamics import _chebyshev_coefficients

from oracles import bessel_j, free_amplitude


def test_state_vector_construction():
    psi = StateVector.from_sites({-3: 1.0, 2: 0.5j}, 5)
    assert psi.dim == 11
    assert psi.amplitudes[2] == 1.0
    assert psi.amplitudes[7] == 0.5j
    assert psi.support_bounds() == (2, 7)
    assert psi.support_radius() == 3
    assert psi.norm == pytest.approx(np.sqrt(1.25), abs=1e-15)
    with pytest.raises(ConfigError):
        StateVector.from_sites({6: 1.0}, 5)


def test_state_vector_delta():
    d = StateVector.delta(0, 4)
    assert d.amplitudes[4] == 1.0
    assert d.norm == 1.0
    assert d.support_radius() == 0


def test_evolve_exact_time_zero_is_identity():
    params = ModelParams(coupling=0.5, half_width=10, phase=0.2)
    sys = eigendecompose(build_hamiltonian(params))
    rng = np.random.default_rng(80)
    psi = StateVector(rng.standard_normal(21) + 1j * rng.standard_normal(21), -10)
    out = evolve_exact(sys, psi, 0.0)
    assert np.max(np.abs(out.amplitudes - psi.amplitudes)) < 1e-13 * psi.norm


def test_evolve_exact_unitarity_and_reversibility():
    rng = np.random.default_rng(81)
    for _ in range(100):
        params = ModelParams(
            coupling=float(rng.uniform(0.0, 1.5)),
            half_width=int(rng.integers(2, 15)),
            phase=float(rng.random()),
        )
        sys = eigendecompose(build_hamiltonian(params))
        n = params.dim
        psi = StateVector(rng.standard_normal(n) + 1j * rng.standard_normal(n), -params.half_width)
        t = float(rng.uniform(0.0, 20.0))
        forward = evolve_exact(sys, psi, t)
        assert abs(forward.norm - psi.norm) <= 1e-10 * max(1.0, psi.norm)
        back = evolve_exact(sys, forward, -t)
        assert np.max(np.abs(back.amplitudes - psi.amplitudes)) <= 1e-9 * max(1.0, psi.norm)


def test_evolve_exact_dimension_mismatch():
    sys = eigendecompose(np.array([[0.0, 1.0], [1.0, 0.0]]))
    with pytest.raises(ConfigError):
        evolve_exact(sys, StateVector.delta(0, 3), 1.0)


def test_evolve_exact_free_line_bessel_oracle():
    params = ModelParams(coupling=0.0, half_width=220, phase=0.0)
    sys = eigendecompose(build_hamiltonian(params))
    psi0 = StateVector.delta(0, 220)
    for t in (5.0, 20.0):
        out = evolve_exact(sys, psi0, t)
        for n in (-7, -1, 0, 1, 4, 12):
            got = out.amplitudes[n + 220]
            assert abs(got - free_amplitude(n, t)) < 1e-6


def test_evolve_chebyshev_time_zero_is_identity():
    params = ModelParams(coupling=0.5, half_width=10, phase=0.2)
    op = build_hamiltonian(params)
    psi = StateVector.from_sites({0: 0.6, 1: 0.8j}, 10)
    out = evolve_chebyshev(op, psi, 0.0)
    assert np.max(np.abs(out.amplitudes - psi.amplitudes)) < 1e-12


def test_evolve_chebyshev_matches_exact():
    params = ModelParams(coupling=0.5, half_width=200, phase=0.0)
    op = build_hamiltonian(params)
    psi = StateVector.delta(0, 200)
    exact = evolve_exact(eigendecompose(op), psi, 50.0)
    cheb = evolve_chebyshev(op, psi, 50.0, tol=1e-10)
    assert np.max(np.abs(exact.amplitudes - cheb.amplitudes)) <= 1e-10
    assert abs(cheb.norm - 1.0) <= 1e-10


def test_evolve_chebyshev_random_cases():
    rng = np.random.default_rng(82)
    for _ in range(10):
        params = ModelParams(
            coupling=float(rng.uniform(0.0, 1.0)),
            half_width=int(rng.integers(20, 50)),
            phase=float(rng.random()),
        )
        op = build_hamiltonian(params)
        n = params.dim
        amps = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        psi = StateVector(amps / np.linalg.norm(amps), -params.half_width)
        t = float(rng.uniform(0.0, 10.0))
        exact = evolve_exact(eigendecompose(op), psi, t)
        cheb = evolve_chebyshev(op, psi, t)
        assert np.max(np.abs(exact.amplitudes - cheb.amplitudes)) <= 1e-10
        assert abs(cheb.norm - 1.0) <= 1e-10


def test_evolve_chebyshev_validates():
    params = ModelParams(coupling=0.5, half_width=5, phase=0.0)
    op = build_hamiltonian(params)
    with pytest.raises(ConfigError):
        evolve_chebyshev(op, StateVector.delta(0, 5), 1.0, tol=0.0)
    with pytest.raises(ConfigError):
        evolve_chebyshev(op, StateVector.delta(0, 4), 1.0)


def test_chebyshev_coefficient_cap():
    with pytest.raises(CapExceededError):
        _chebyshev_coefficients(100.0, 1e-10, cap=30)


def test_phase_averaged_amplitude_at_time_zero():
    params = ModelParams(coupling=0.5, half_width=40, phase=0.0)
    psi = StateVector.from_sites({0: 0.6, 1: 0.8j}, 40)
    phi = StateVector.from_sites({0: 1.0, 1: -0.5}, 40)
    series = phase_averaged_amplitude(psi, phi, [0.0, 1.0], params)
    overlap = np.sum(psi.amplitudes * np.conj(phi.amplitudes))
    assert abs(series.values[0] - overlap) < 1e-12


def test_phase_averaged_amplitude_brute_force_interval_sum():
    # same finite-volume quantity, computed by per-interval eigensystems
    params = ModelParams(coupling=0.5, half_width=30, phase=0.0)
    rng = np.random.default_rng(83)
    psi_entries = {-2: complex(rng.standard_normal(), rng.standard_normal()),
                   1: complex(rng.standard_normal(), rng.standard_normal())}
    phi_entries = {0: complex(rng.standard_normal(), rng.standard_normal()),
                   2: complex(rng.standard_normal(), rng.standard_normal())}
    psi = StateVector.from_sites(psi_entries, 30)
    phi = StateVector.from_sites(phi_entries, 30)
    t_grid = np.array([0.0, 0.7, 3.1, 10.0])
    got = phase_averaged_amplitude(psi, phi, t_grid, params, enforce_light_cone=False)
    part = phase_partition(params)
    want = np.zeros(len(t_grid), dtype=complex)
    for rep, length in zip(part.representatives, part.lengths):
        p = ModelParams(coupling=0.5, half_width=30, phase=float(rep))
        sys = eigendecompose(build_hamiltonian(p))
        for i, t in enumerate(t_grid):
            evolved = evolve_exact(sys, psi, float(t))
            want[i] += length * np.sum(evolved.amplitudes * np.conj(phi.amplitudes))
    assert np.max(np.abs(got.values - want)) < 1e-10


def test_phase_averaged_amplitude_delta_pair_equals_dos_trace():
    params = ModelParams(coupling=0.5, half_width=40, phase=0.0)
    delta0 = StateVector.delta(0, 40)
    t_grid = np.linspace(0.0, 12.0, 49)
    series = phase_averaged_amplitude(delta0, delta0, t_grid, params)
    trace = dos_fourier_trace(params, t_grid)
    assert np.max(np.abs(series.values - trace.values)) < 1e-12
    materialized = fourier(density_of_states(params), t_grid)
    assert np.max(np.abs(series.values - materialized.values)) < 1e-9


def test_phase_averaged_amplitude_free_case_bessel():
    params = ModelParams(coupling=0.0, half_width=60, phase=0.0)
    delta0 = StateVector.delta(0, 60)
    t_grid = np.linspace(0.0, 17.0, 35)
    series = phase_averaged_amplitude(delta0, delta0, t_grid, params)
    want = np.array([bessel_j(0, 2.0 * t) for t in t_grid])
    assert np.max(np.abs(series.values - want)) < 1e-6


def test_phase_averaged_amplitude_bound():
    params = ModelParams(coupling=0.5, half_width=50, phase=0.0)
    rng = np.random.default_rng(84)
    for _ in range(5):
        psi = StateVector.from_sites(
            {int(rng.integers(-2, 3)): complex(rng.standard_normal(), rng.standard_normal())},
            50,
        )
        phi = StateVector.from_sites(
            {int(rng.integers(-2, 3)): complex(rng.standard_normal(), rng.standard_normal())},
            50,
        )
        series = phase_averaged_amplitude(psi, phi, np.linspace(0.0, 10.0, 21), params)
        assert np.all(series.abs_values() <= psi.norm * phi.norm + 1e-12)


def test_phase_averaged_amplitude_validates():
    params = ModelParams(coupling=0.5, half_width=40, phase=0.0)
    delta0 = StateVector.delta(0, 40)
    with pytest.raises(ConfigError):
        phase_averaged_amplitude(delta0, delta0, [], params)
    with pytest.raises(ConfigError):
        phase_averaged_amplitude(delta0, delta0, [1.0, 1.0], params)
    with pytest.raises(ConfigError):
        phase_averaged_amplitude(StateVector.delta(0, 39), delta0, [1.0], params)
    with pytest.raises(LightConeError):
        phase_averaged_amplitude(delta0, delta0, [100.0], params)


def test_escape_block_maxima_known_series():
    t = np.linspace(4.0, 32.0, 29)
    series = AmplitudeSeries(t, (1.0 / t).astype(complex))
    blocks = escape_block_maxima(series, 2, 4)
    assert blocks == [(2, 0.25), (3, 0.125), (4, 0.0625)]


def test_escape_block_maxima_needs_samples():
    series = AmplitudeSeries(np.array([4.0, 5.0]), np.array([1.0, 1.0], dtype=complex))
    with pytest.raises(ConfigError):
        escape_block_maxima(series, 2, 3)


def test_shift_state():
    entries = {0: 1.0 + 0.0j, 2: 1.0j}
    assert shift_state(entries, 3) == {-3: 1.0 + 0.0j, -1: 1.0j}
    assert shift_state(entries, 0) == entries


def test_l1_decomposition_delta_is_exact():
    params = ModelParams(coupling=0.5, half_width=60, phase=0.0)
    assert l1_decomposition_check({0: 1.0}, {0: 1.0}, 5.0, params) == 0.0


def test_l1_decomposition_two_site_state():
    params = ModelParams(coupling=0.5, half_width=200, phase=0.0)
    s = 1.0 / np.sqrt(2.0)
    d = l1_decomposition_check({0: s, 1: s}, {0: 1.0}, 10.0, params)
    assert d <= 1e-8


def test_l1_decomposition_free_case():
    params = ModelParams(coupling=0.0, half_width=100, phase=0.0)
    rng = np.random.default_rng(85)
    entries = {
        int(site): complex(rng.standard_normal(), rng.standard_normal())
        for site in rng.choice(np.arange(-4, 5), size=3, replace=False)
    }
    assert l1_decomposition_check(entries, {0: 1.0}, 8.0, params) <= 1e-8


def test_l1_decomposition_validates():
    params = ModelParams(coupling=0.5, half_width=60, phase=0.0)
    with pytest.raises(ConfigError):
        l1_decomposition_check({}, {0: 1.0}, 5.0, params)
