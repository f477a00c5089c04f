"""Recurrence kernels against dense-matrix and Bessel-series oracles."""

import numpy as np
from scipy.special import jv

from quasispec.kernels import (
    bessel_sum_eval,
    center_moments,
    chebyshev_apply,
    cross_moments,
    truncation_order,
)

from oracles import dense_chebyshev_vectors


def tridiag(diag: np.ndarray) -> np.ndarray:
    n = len(diag)
    return np.diag(diag) + np.diag(np.ones(n - 1), 1) + np.diag(np.ones(n - 1), -1)


def test_truncation_order_floor_and_growth():
    assert truncation_order(0.0) == 60
    assert truncation_order(-5.0) == truncation_order(5.0)
    rng = np.random.default_rng(60)
    xs = np.sort(rng.uniform(0.0, 5000.0, 50))
    orders = [truncation_order(x) for x in xs]
    assert all(o2 >= o1 for o1, o2 in zip(orders, orders[1:]))
    # superexponential Bessel tails: J_K(x) at K = order(x) is negligible
    for x in (50.0, 500.0, 2500.0):
        assert abs(jv(truncation_order(x), x)) < 1e-15


def test_center_moments_against_dense_recurrence():
    rng = np.random.default_rng(61)
    n, order = 21, 30
    a = 2.5
    diags = rng.uniform(0.0, 0.5, (3, n))
    lengths = np.array([0.2, 0.5, 0.3])
    center = 10
    got = center_moments(diags, lengths, 1.0 / a, center, order)
    want = np.zeros(order + 1)
    delta = np.zeros(n)
    delta[center] = 1.0
    for d, w in zip(diags, lengths):
        vecs = dense_chebyshev_vectors(tridiag(d) / a, delta, order)
        want += w * np.array([v[center].real for v in vecs])
    assert np.max(np.abs(got - want)) < 1e-13


def test_center_moments_window_clipping_at_boundary():
    # center near the edge forces the light-cone window to clip
    rng = np.random.default_rng(62)
    n, order, a = 9, 14, 2.5
    diags = rng.uniform(0.0, 0.5, (2, n))
    lengths = np.array([0.4, 0.6])
    for center in (0, 1, n - 1):
        got = center_moments(diags, lengths, 1.0 / a, center, order)
        want = np.zeros(order + 1)
        delta = np.zeros(n)
        delta[center] = 1.0
        for d, w in zip(diags, lengths):
            vecs = dense_chebyshev_vectors(tridiag(d) / a, delta, order)
            want += w * np.array([v[center].real for v in vecs])
        delta[center] = 0.0
        assert np.max(np.abs(got - want)) < 1e-13


def test_center_moments_zeroth_is_total_length():
    diags = np.zeros((2, 5))
    lengths = np.array([0.3, 0.45])
    got = center_moments(diags, lengths, 1.0 / 2.0, 2, 6)
    assert got[0] == 0.75


def test_cross_moments_against_dense_recurrence():
    rng = np.random.default_rng(63)
    n, order, a = 25, 24, 2.5
    diags = rng.uniform(0.0, 0.5, (3, n))
    lengths = np.array([0.1, 0.6, 0.3])
    psi = np.zeros(n, dtype=complex)
    phi = np.zeros(n, dtype=complex)
    psi[10:14] = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    phi[11:16] = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    got = cross_moments(
        diags, lengths, 1.0 / a, psi, np.conj(phi), 10, 13, 11, 15, order
    )
    want = np.zeros(order + 1, dtype=complex)
    for d, w in zip(diags, lengths):
        vecs = dense_chebyshev_vectors(tridiag(d) / a, psi, order)
        want += w * np.array([np.sum(np.conj(phi) * v) for v in vecs])
    assert np.max(np.abs(got - want)) < 1e-12


def test_chebyshev_apply_against_dense_polynomial():
    rng = np.random.default_rng(64)
    n, order, a = 31, 20, 2.5
    diag = rng.uniform(0.0, 0.5, n)
    psi = np.zeros(n, dtype=complex)
    psi[14:18] = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    coeffs = rng.standard_normal(order + 1) + 1j * rng.standard_normal(order + 1)
    got = chebyshev_apply(diag, 1.0 / a, psi, coeffs, 14, 17)
    vecs = dense_chebyshev_vectors(tridiag(diag) / a, psi, order)
    want = np.zeros(n, dtype=complex)
    for c, v in zip(coeffs, vecs):
        want += c * v
    assert np.max(np.abs(got - want)) < 1e-12


def direct_bessel_sum(moments, scale, grid):
    vals = np.zeros(len(grid), dtype=complex)
    for k, mk in enumerate(moments):
        factor = 1.0 if k == 0 else 2.0
        vals += factor * (1j**k) * jv(k, scale * np.asarray(grid)) * mk
    return vals


def test_bessel_sum_eval_matches_direct_summation():
    rng = np.random.default_rng(65)
    grid = np.linspace(0.0, 20.0, 101)
    for _ in range(5):
        order = int(rng.integers(5, 80))
        moments = rng.uniform(-1.0, 1.0, order + 1)
        got = bessel_sum_eval(moments, 2.5, grid)
        want = direct_bessel_sum(moments, 2.5, grid)
        assert np.max(np.abs(got - want)) < 1e-12


def test_bessel_sum_eval_complex_moments_branch():
    rng = np.random.default_rng(66)
    grid = np.linspace(0.0, 15.0, 61)
    order = 40
    moments = rng.standard_normal(order + 1) + 1j * rng.standard_normal(order + 1)
    got = bessel_sum_eval(moments, 2.0, grid)
    want = direct_bessel_sum(moments, 2.0, grid)
    assert np.max(np.abs(got - want)) < 1e-12


def test_bessel_sum_eval_large_argument():
    # push the quadrature well past the aliasing-margin regime
    rng = np.random.default_rng(67)
    grid = np.linspace(0.0, 400.0, 41)
    order = truncation_order(2.5 * 400.0)
    moments = rng.uniform(-0.5, 0.5, order + 1)
    got = bessel_sum_eval(moments, 2.5, grid)
    want = direct_bessel_sum(moments, 2.5, grid)
    assert np.max(np.abs(got - want)) < 1e-10


def test_bessel_sum_eval_zeroth_order_only():
    grid = np.linspace(0.0, 10.0, 21)
    got = bessel_sum_eval(np.array([0.7]), 3.0, grid)
    assert np.max(np.abs(got - 0.7 * jv(0, 3.0 * grid))) < 1e-13


def test_bessel_sum_eval_at_zero_returns_mass():
    # at t=0 only J_0 contributes, so the value is m_0
    moments = np.array([1.0, 0.3, -0.2, 0.05])
    got = bessel_sum_eval(moments, 2.5, np.array([0.0]))
    assert abs(got[0] - 1.0) < 1e-14
