"""Eigendecomposition, spectral measures, and the density of states.

The spectral measure of a state psi under a finite symmetric H puts weight
|<v_j, psi>|^2 on each eigenvalue E_j. The density of states is the phase
average of the spectral measures of delta_0; the exact phase partition turns
that integral into a finite sum of interval length times per-representative
spectral measure.

Two routes to the density of states coexist and are cross-checked:
  * density_of_states materializes the atoms (eigendecomposition per
    partition interval) - affordable at small windows;
  * dos_fourier_trace evaluates mu_hat directly from aggregated Chebyshev
    moments - the only route that scales to half-widths in the thousands,
    where materializing atoms would take hours.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh, eigh_tridiagonal

from .exceptions import ConfigError, EigensolverError
from .kernels import bessel_sum_eval, center_moments, truncation_order
from .measures import AtomicMeasure, FourierTrace, convolve_binned, convolve_exact, fourier, from_atoms
from .operator import ModelParams, TridiagonalOperator, phase_partition, tensor_sum

DENSE_SYMMETRY_TOL = 1e-10


@dataclass(frozen=True)
class EigenSystem:
    """Sorted eigenvalues with orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)


def eigendecompose(op) -> EigenSystem:
    """Full eigensystem of a TridiagonalOperator or dense symmetric array."""
    try:
        if isinstance(op, TridiagonalOperator):
            if op.dim == 1:
                return EigenSystem(op.diag.astype(float), np.ones((1, 1)))
            ev, q = eigh_tridiagonal(op.diag, np.ones(op.dim - 1))
        else:
            m = np.asarray(op, dtype=float)
            if m.ndim != 2 or m.shape[0] != m.shape[1]:
                raise ConfigError(f"expected a square matrix, got shape {m.shape}")
            if float(np.max(np.abs(m - m.T), initial=0.0)) > DENSE_SYMMETRY_TOL:
                raise ConfigError("matrix is not symmetric")
            ev, q = eigh(m)
    except np.linalg.LinAlgError as err:
        raise EigensolverError(f"eigensolver failed to converge: {err}") from err
    return EigenSystem(ev, q)


def spectral_measure(sys: EigenSystem, psi, coalesce_tol: float | None = None) -> AtomicMeasure:
    """Atoms at eigenvalues, weights |<v_j, psi>|^2; mass = ||psi||^2."""
    vec = np.asarray(psi)
    if vec.shape != (sys.dim,):
        raise ConfigError(f"state has shape {vec.shape}, expected ({sys.dim},)")
    coeffs = sys.eigenvectors.T @ vec
    weights = np.abs(coeffs) ** 2
    if coalesce_tol is None:
        spread = float(sys.eigenvalues[-1] - sys.eigenvalues[0]) if sys.dim > 1 else 0.0
        coalesce_tol = 1e-12 * max(1.0, spread)
    return from_atoms(sys.eigenvalues, weights, coalesce_tol=coalesce_tol)


def _dos_coalesce_tol(params: ModelParams) -> float:
    # spectral diameter bound of the family
    return 1e-12 * (4.0 + 2.0 * params.coupling)


def _center_weights(diag: np.ndarray, center: int) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues and squared center components of one diagonal pattern."""
    if len(diag) == 1:
        return diag.astype(float), np.ones(1)
    ev, q = eigh_tridiagonal(diag, np.ones(len(diag) - 1))
    return ev, q[center, :] ** 2


def density_of_states(params: ModelParams, threads: int = 1) -> AtomicMeasure:
    """Exact phase average of the spectral measures of delta_0.

    Sum over partition intervals of length times the spectral measure at the
    representative phase; intervals with identical diagonal patterns share
    one eigendecomposition. Reduction order is fixed (sorted breakpoints) so
    results are reproducible regardless of thread count.
    """
    part = phase_partition(params)
    pats, lens = part.grouped_patterns()
    center = params.half_width
    try:
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(lambda d: _center_weights(d, center), pats))
        else:
            results = [_center_weights(d, center) for d in pats]
    except np.linalg.LinAlgError as err:
        raise EigensolverError(f"eigensolver failed to converge: {err}") from err
    positions = np.concatenate([ev for ev, _ in results])
    weights = np.concatenate([w * g for g, (_, w) in zip(lens, results)])
    return from_atoms(positions, weights, coalesce_tol=_dos_coalesce_tol(params))


def density_of_states_riemann(params: ModelParams, n_phases: int) -> AtomicMeasure:
    """Plain quadrature benchmark: average over a uniform midpoint phase grid.

    Deliberately ignorant of the exact partition; used to validate it. Phases
    sharing a diagonal pattern share one eigendecomposition, which keeps the
    10^5-point grid affordable without changing the result.
    """
    if n_phases < 1:
        raise ConfigError("need at least one phase")
    omegas = (np.arange(n_phases) + 0.5) / n_phases
    sites = params.sites()
    x = (omegas[:, None] + sites[None, :] * params.alpha) % 1.0
    pats = np.where(x >= 1.0 - params.alpha, params.coupling, 0.0)
    center = params.half_width
    cache: dict[bytes, tuple[np.ndarray, np.ndarray]] = {}
    pieces_pos, pieces_w = [], []
    share = 1.0 / n_phases
    counts: dict[bytes, int] = {}
    order: list[bytes] = []
    for i in range(n_phases):
        key = pats[i].tobytes()
        if key not in counts:
            counts[key] = 0
            order.append(key)
            cache[key] = _center_weights(pats[i], center)
        counts[key] += 1
    for key in order:
        ev, w = cache[key]
        pieces_pos.append(ev)
        pieces_w.append(w * (share * counts[key]))
    return from_atoms(
        np.concatenate(pieces_pos), np.concatenate(pieces_w),
        coalesce_tol=_dos_coalesce_tol(params),
    )


def dos_moments(params: ModelParams, order: int) -> np.ndarray:
    """Aggregated Chebyshev moments of the density of states.

    M_k = sum over partition intervals of length * <delta_0, T_k(H/a) delta_0>
    with the family norm bound a = 2 + V as the rescaling.
    """
    part = phase_partition(params)
    pats, lens = part.grouped_patterns()
    a = 2.0 + params.coupling
    return center_moments(
        np.ascontiguousarray(pats), lens, 1.0 / a, params.half_width, order
    )


def dos_fourier_trace(params: ModelParams, xi_grid, moments: np.ndarray | None = None) -> FourierTrace:
    """mu_hat of the density of states without materializing its atoms.

    Identical (to machine precision) to fourier(density_of_states(params))
    on the same grid; the suite checks that where both routes are affordable.
    Precomputed moments may be passed to share work across grids.
    """
    xi = np.asarray(xi_grid, dtype=float).ravel()
    if len(xi) > 1 and not np.all(np.diff(xi) > 0.0):
        raise ConfigError("frequency grid must be strictly increasing")
    if len(xi) < 1:
        raise ConfigError("frequency grid is empty")
    a = 2.0 + params.coupling
    needed = truncation_order(a * float(np.max(np.abs(xi))))
    if moments is None:
        moments = dos_moments(params, needed)
    elif len(moments) - 1 < needed:
        raise ConfigError(
            f"supplied moments cover order {len(moments) - 1}, grid needs {needed}"
        )
    return FourierTrace(xi, bessel_sum_eval(moments, a, xi))


def tensor_spectral_check(factors, states, xi_grid=None, cap: int = 4096, bin_width: float | None = None) -> float:
    """Max Fourier discrepancy between the tensor route and the convolution route.

    Left side: spectral measure of psi_1 x ... x psi_N under the Kronecker-sum
    Hamiltonian. Right side: convolution of the factor spectral measures.
    Equality is the convolution identity for spectral measures of product
    states; both sides are computed independently.
    """
    if len(factors) != len(states) or not factors:
        raise ConfigError("need one state per factor")
    if xi_grid is None:
        xi_grid = np.linspace(0.0, 20.0, 200)
    big = tensor_sum(factors, cap=cap)
    psi = states[0]
    for s in states[1:]:
        psi = np.kron(psi, s)
    direct = spectral_measure(eigendecompose(big), psi)
    factor_measures = [
        spectral_measure(eigendecompose(f), s) for f, s in zip(factors, states)
    ]
    conv = factor_measures[0]
    for m in factor_measures[1:]:
        conv = convolve_binned(conv, m, bin_width) if bin_width else convolve_exact(conv, m)
    lhs = fourier(direct, xi_grid).values
    rhs = fourier(conv, xi_grid).values
    return float(np.max(np.abs(lhs - rhs)))
