"""Recurrence kernels behind the large-window pipelines.

Everything here exploits one fact: for a tridiagonal H with ||H|| <= a, the
Chebyshev polynomials of Ht = H/a satisfy a three-term recurrence whose
iterates spread support by exactly one site per order. That gives

    <e^{itH} psi, phi> = sum_k (2 - delta_k0) i^k J_k(a t) <T_k(Ht) psi, phi>

with superexponentially decaying Bessel coefficients past order a*t, so a
degree a*t_max + O((a*t_max)^{1/3}) truncation is exact to machine precision.
The inner products are cheap per phase-partition interval; the expensive
outer evaluation over a dense t or xi grid is done by an exact band-limited
quadrature instead of per-order Bessel calls.
"""

from __future__ import annotations

import numba
import numpy as np


def truncation_order(x_max: float) -> int:
    """Chebyshev degree covering Bessel argument x_max to ~1e-16 tails."""
    x = abs(float(x_max))
    return int(x + 12.0 * x ** (1.0 / 3.0) + 60.0)


@numba.njit(cache=True)
def center_moments(diags, lengths, inv_a, center, order):
    """Aggregated real moments M_k = sum_g len_g <delta_c, T_k(H_g/a) delta_c>.

    diags: (groups, n) potential diagonals; off-diagonals are all 1.
    The iterate T_k(Ht) delta_c is supported in [center-k, center+k], so the
    recurrence only touches that window.
    """
    n_groups, n = diags.shape
    out = np.zeros(order + 1)
    x0 = np.zeros(n)
    x1 = np.zeros(n)
    for g in range(n_groups):
        w = lengths[g]
        d = diags[g]
        for i in range(n):
            x0[i] = 0.0
            x1[i] = 0.0
        x0[center] = 1.0
        out[0] += w
        lo = center - 1 if center > 0 else 0
        hi = center + 1 if center < n - 1 else n - 1
        for i in range(lo, hi + 1):
            acc = d[i] * x0[i]
            if i > 0:
                acc += x0[i - 1]
            if i < n - 1:
                acc += x0[i + 1]
            x1[i] = acc * inv_a
        if order >= 1:
            out[1] += w * x1[center]
        for k in range(2, order + 1):
            lo = center - k if center >= k else 0
            hi = center + k if center + k < n else n - 1
            for i in range(lo, hi + 1):
                acc = d[i] * x1[i]
                if i > 0:
                    acc += x1[i - 1]
                if i < n - 1:
                    acc += x1[i + 1]
                x0[i] = 2.0 * inv_a * acc - x0[i]
            out[k] += w * x0[center]
            tmp = x0
            x0 = x1
            x1 = tmp
    return out


@numba.njit(cache=True)
def cross_moments(diags, lengths, inv_a, psi, phi_conj, lo0, hi0, plo, phi_hi, order):
    """Aggregated complex moments sum_g len_g <T_k(H_g/a) psi, phi>.

    psi, phi_conj: dense complex vectors (phi already conjugated); psi is
    supported in [lo0, hi0], phi in [plo, phi_hi]. Inner products restrict to
    phi's support; the recurrence window expands by one site per order.
    """
    n_groups, n = diags.shape
    out = np.zeros(order + 1, dtype=np.complex128)
    x0 = np.zeros(n, dtype=np.complex128)
    x1 = np.zeros(n, dtype=np.complex128)
    for g in range(n_groups):
        w = lengths[g]
        d = diags[g]
        for i in range(n):
            x0[i] = 0.0
            x1[i] = 0.0
        for i in range(lo0, hi0 + 1):
            x0[i] = psi[i]
        acc0 = 0.0 + 0.0j
        for i in range(plo, phi_hi + 1):
            acc0 += phi_conj[i] * x0[i]
        out[0] += w * acc0
        lo = lo0 - 1 if lo0 > 0 else 0
        hi = hi0 + 1 if hi0 < n - 1 else n - 1
        for i in range(lo, hi + 1):
            acc = d[i] * x0[i]
            if i > 0:
                acc += x0[i - 1]
            if i < n - 1:
                acc += x0[i + 1]
            x1[i] = acc * inv_a
        if order >= 1:
            acc1 = 0.0 + 0.0j
            for i in range(plo, phi_hi + 1):
                acc1 += phi_conj[i] * x1[i]
            out[1] += w * acc1
        for k in range(2, order + 1):
            lo = lo0 - k if lo0 >= k else 0
            hi = hi0 + k if hi0 + k < n else n - 1
            for i in range(lo, hi + 1):
                acc = d[i] * x1[i]
                if i > 0:
                    acc += x1[i - 1]
                if i < n - 1:
                    acc += x1[i + 1]
                x0[i] = 2.0 * inv_a * acc - x0[i]
            acck = 0.0 + 0.0j
            for i in range(plo, phi_hi + 1):
                acck += phi_conj[i] * x0[i]
            out[k] += w * acck
            tmp = x0
            x0 = x1
            x1 = tmp
    return out


@numba.njit(cache=True)
def chebyshev_apply(diag, inv_a, psi, coeffs, lo0, hi0):
    """y = sum_k coeffs[k] T_k(H/a) psi for a tridiagonal H.

    psi supported in [lo0, hi0]; support grows by one site per order, so the
    cost is O(order * min(order, n)) instead of O(order * n).
    """
    n = len(diag)
    order = len(coeffs) - 1
    y = np.zeros(n, dtype=np.complex128)
    x0 = np.zeros(n, dtype=np.complex128)
    x1 = np.zeros(n, dtype=np.complex128)
    for i in range(lo0, hi0 + 1):
        x0[i] = psi[i]
        y[i] = coeffs[0] * psi[i]
    if order == 0:
        return y
    lo = lo0 - 1 if lo0 > 0 else 0
    hi = hi0 + 1 if hi0 < n - 1 else n - 1
    for i in range(lo, hi + 1):
        acc = diag[i] * x0[i]
        if i > 0:
            acc += x0[i - 1]
        if i < n - 1:
            acc += x0[i + 1]
        x1[i] = acc * inv_a
        y[i] += coeffs[1] * x1[i]
    for k in range(2, order + 1):
        lo = lo0 - k if lo0 >= k else 0
        hi = hi0 + k if hi0 + k < n else n - 1
        for i in range(lo, hi + 1):
            acc = diag[i] * x1[i]
            if i > 0:
                acc += x1[i - 1]
            if i < n - 1:
                acc += x1[i + 1]
            x0[i] = 2.0 * inv_a * acc - x0[i]
            y[i] += coeffs[k] * x0[i]
        tmp = x0
        x0 = x1
        x1 = tmp
    return y


def bessel_sum_eval(moments, scale, grid):
    """Evaluate f(t) = sum_k (2 - delta_k0) i^k J_k(scale*t) m_k on a grid.

    Writes the sum as the integral of e^{i t scale cos(theta)} against the
    cosine polynomial rho(theta) = (1/pi) (m_0 + 2 sum m_k cos k theta) and
    applies the N-node trapezoid rule on the circle, which is exact for
    trigonometric polynomials of degree < N. The e^{ix cos theta} factor is
    band-limited to degree |x| + O(|x|^{1/3}) at machine precision, so N is
    chosen past the sum of both bandwidths. Cost: one FFT plus a chunked
    complex exponential, independent of the number of Bessel orders.
    """
    m = np.asarray(moments)
    t = np.atleast_1d(np.asarray(grid, dtype=float))
    order = len(m) - 1
    x_max = float(scale) * float(np.max(np.abs(t), initial=0.0))
    n_min = order + int(x_max + 12.0 * x_max ** (1.0 / 3.0)) + 64
    n_nodes = 1 << max(7, int(np.ceil(np.log2(n_min))))
    c = np.zeros(n_nodes, dtype=np.complex128)
    c[0] = m[0]
    c[1 : order + 1] = 2.0 * m[1:]
    if np.iscomplexobj(m) and np.any(m.imag):
        g = 0.5 * (np.fft.ifft(c) + np.conj(np.fft.ifft(np.conj(c))))
    else:
        g = np.real(np.fft.ifft(c)).astype(np.complex128)
    theta = 2.0 * np.pi * np.arange(n_nodes) / n_nodes
    lam = float(scale) * np.cos(theta)
    vals = np.empty(len(t), dtype=np.complex128)
    chunk = max(1, int(8e6) // n_nodes)
    for s in range(0, len(t), chunk):
        block = t[s : s + chunk]
        vals[s : s + chunk] = np.exp(1j * np.outer(block, lam)) @ g
    return vals
