"""Time evolution and phase-averaged transition amplitudes.

The headline quantity is A(t) = integral over the phase torus of
<e^{itH_w} psi, phi> dw, computed exactly over the phase partition as a
length-weighted sum of per-interval amplitudes. For psi = phi = delta_0 this
equals the Fourier transform of the density of states, which the suite
cross-checks against the spectral module.

Truncation honesty: a tridiagonal with unit hopping propagates no faster
than 2 sites per unit time. A transition amplitude between states near the
origin is only polluted once the wavefront reaches the boundary and comes
back, so the guard is the round-trip rule

    2 L >= 2 t_max + r_psi + r_phi + margin (50 sites).

Site-resolved output (evolve_*) spreads one-way; its callers pick L with
2 t_max + support + margin directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import jv

from .exceptions import CapExceededError, ConfigError, LightConeError
from .kernels import bessel_sum_eval, center_moments, chebyshev_apply, cross_moments, truncation_order
from .operator import ModelParams, TridiagonalOperator, phase_partition
from .spectral import EigenSystem

LIGHT_CONE_MARGIN = 50

CHEBYSHEV_DEFAULT_TOL = 1e-10

# consecutive negligible Bessel coefficients required before truncating
_STOP_RUN = 3


@dataclass(frozen=True)
class StateVector:
    """Complex amplitudes on the lattice window [-L, L]."""

    amplitudes: np.ndarray
    site_offset: int

    @classmethod
    def from_sites(cls, entries: dict[int, complex], half_width: int) -> "StateVector":
        amps = np.zeros(2 * half_width + 1, dtype=np.complex128)
        for site, value in entries.items():
            if abs(site) > half_width:
                raise ConfigError(f"site {site} outside window [-{half_width}, {half_width}]")
            amps[site + half_width] = value
        return cls(amps, -half_width)

    @classmethod
    def delta(cls, site: int, half_width: int) -> "StateVector":
        return cls.from_sites({site: 1.0}, half_width)

    @property
    def dim(self) -> int:
        return len(self.amplitudes)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def support_bounds(self) -> tuple[int, int]:
        """Smallest and largest occupied array indices (0, dim-1 if empty)."""
        nz = np.flatnonzero(self.amplitudes)
        if len(nz) == 0:
            return 0, self.dim - 1
        return int(nz[0]), int(nz[-1])

    def support_radius(self) -> int:
        """Largest |lattice site| carrying amplitude."""
        nz = np.flatnonzero(self.amplitudes)
        if len(nz) == 0:
            return 0
        sites = nz + self.site_offset
        return int(np.max(np.abs(sites)))


@dataclass(frozen=True)
class AmplitudeSeries:
    """Phase-averaged amplitudes A(t) on an increasing time grid."""

    t_grid: np.ndarray
    values: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.t_grid)

    def abs_values(self) -> np.ndarray:
        return np.abs(self.values)


def evolve_exact(sys: EigenSystem, psi: StateVector, t: float) -> StateVector:
    """e^{itH} psi through the eigensystem: Q e^{it Lambda} Q^T psi."""
    if psi.dim != sys.dim:
        raise ConfigError(f"state dim {psi.dim} does not match system dim {sys.dim}")
    coeffs = sys.eigenvectors.T @ psi.amplitudes
    out = sys.eigenvectors @ (np.exp(1j * t * sys.eigenvalues) * coeffs)
    return StateVector(out, psi.site_offset)


def _chebyshev_coefficients(a_t: float, tol: float, cap: int) -> np.ndarray:
    """(2 - delta_k0) i^k J_k(a t), truncated once three consecutive orders
    fall below tol/10; error signals the degree cap budget was too small."""
    orders = np.arange(cap + 1)
    bessel = jv(orders, a_t)
    small = np.abs(bessel) < tol / 10.0
    run = 0
    stop = None
    for k in range(cap + 1):
        run = run + 1 if small[k] else 0
        if run == _STOP_RUN:
            stop = k
            break
    if stop is None:
        raise CapExceededError(
            f"Chebyshev degree cap {cap} exceeded before coefficients fell below {tol / 10.0:g}"
        )
    coeffs = (2.0 * (1j ** orders[: stop + 1])) * bessel[: stop + 1]
    coeffs[0] *= 0.5
    return coeffs


def evolve_chebyshev(
    op: TridiagonalOperator,
    psi: StateVector,
    t: float,
    tol: float = CHEBYSHEV_DEFAULT_TOL,
) -> StateVector:
    """Polynomial propagator: e^{itH} psi = sum_k c_k(t) T_k(H/a) psi.

    a = 2 + V bounds the spectrum, putting H/a inside [-1, 1] where the
    Chebyshev expansion of e^{i a t x} has Bessel coefficients. Cost is one
    sparse recurrence per order; no eigendecomposition, no dense matrices.
    """
    if tol <= 0.0:
        raise ConfigError(f"tolerance must be positive, got {tol}")
    if psi.dim != op.dim:
        raise ConfigError(f"state dim {psi.dim} does not match operator dim {op.dim}")
    a = 2.0 + float(np.max(op.diag, initial=0.0))
    cap = int(4.0 * a * abs(t) + 200.0)
    coeffs = _chebyshev_coefficients(a * t, tol, cap)
    lo, hi = psi.support_bounds()
    out = chebyshev_apply(
        np.ascontiguousarray(op.diag, dtype=float), 1.0 / a,
        np.ascontiguousarray(psi.amplitudes, dtype=np.complex128), coeffs, lo, hi,
    )
    return StateVector(out, psi.site_offset)


def _light_cone_check(params: ModelParams, t_max: float, r_psi: int, r_phi: int) -> None:
    need = 2.0 * t_max + r_psi + r_phi + LIGHT_CONE_MARGIN
    have = 2.0 * params.half_width
    if have < need:
        raise LightConeError(
            f"round-trip light cone needs 2L >= {need:.0f}, have {have:.0f}; "
            f"increase half_width or reduce t_max"
        )


def phase_averaged_amplitude(
    psi: StateVector,
    phi: StateVector,
    t_grid,
    params: ModelParams,
    enforce_light_cone: bool = True,
) -> AmplitudeSeries:
    """A(t) = sum over partition intervals of length * <e^{itH_rep} psi, phi>.

    Evaluated through aggregated Chebyshev moments rather than per-interval
    eigendecompositions, which is what makes half-widths in the thousands
    affordable. The inner product is linear in psi and conjugate-linear in
    phi: A(0) = <psi, phi> = sum_n psi(n) conj(phi(n)).
    """
    t = np.asarray(t_grid, dtype=float).ravel()
    if len(t) == 0:
        raise ConfigError("time grid is empty")
    if len(t) > 1 and not np.all(np.diff(t) > 0.0):
        raise ConfigError("time grid must be strictly increasing")
    if psi.dim != params.dim or phi.dim != params.dim:
        raise ConfigError("state dimensions must match the model window")
    t_max = float(np.max(np.abs(t)))
    if enforce_light_cone:
        _light_cone_check(params, t_max, psi.support_radius(), phi.support_radius())
    part = phase_partition(params)
    pats, lens = part.grouped_patterns()
    a = 2.0 + params.coupling
    order = truncation_order(a * t_max)
    center = params.half_width
    lo, hi = psi.support_bounds()
    plo, phi_hi = phi.support_bounds()
    delta_pair = (
        lo == hi == plo == phi_hi == center
        and psi.amplitudes[center] == 1.0
        and phi.amplitudes[center] == 1.0
    )
    if delta_pair:
        moments = center_moments(np.ascontiguousarray(pats), lens, 1.0 / a, center, order)
    else:
        moments = cross_moments(
            np.ascontiguousarray(pats), lens, 1.0 / a,
            np.ascontiguousarray(psi.amplitudes, dtype=np.complex128),
            np.ascontiguousarray(np.conj(phi.amplitudes), dtype=np.complex128),
            lo, hi, plo, phi_hi, order,
        )
    return AmplitudeSeries(t, bessel_sum_eval(moments, a, t))


def escape_block_maxima(series: AmplitudeSeries, j_lo: int = 2, j_hi: int = 9) -> list[tuple[int, float]]:
    """Max of |A(t)| over each dyadic window [2^j, 2^{j+1}), j = j_lo..j_hi."""
    t = series.t_grid
    vals = series.abs_values()
    out = []
    for j in range(j_lo, j_hi + 1):
        mask = (t >= 2.0**j) & (t < 2.0 ** (j + 1))
        if not np.any(mask):
            raise ConfigError(f"time grid has no samples in [2^{j}, 2^{j + 1})")
        out.append((j, float(np.max(vals[mask]))))
    return out


def shift_state(entries: dict[int, complex], k: int) -> dict[int, complex]:
    """Left shift by k: (S^k phi)(n) = phi(n + k), i.e. sites move by -k."""
    return {site - k: value for site, value in entries.items()}


def l1_decomposition_check(
    psi_entries: dict[int, complex],
    phi_entries: dict[int, complex],
    t: float,
    params: ModelParams,
) -> float:
    """Discrepancy of the finite-support decomposition of the phase average.

    A state psi = sum_k psi(k) delta_k decomposes the averaged amplitude as
    A_{psi,phi} = sum_k psi(k) * A_{delta_0, S^k phi}: shifting the lattice
    by k shifts the phase by k*alpha, and the average over the full torus is
    shift-invariant. Both sides are computed independently on a window
    enlarged by the support radius; they agree up to truncation effects.
    """
    if not psi_entries:
        raise ConfigError("psi has empty support")
    r = max(abs(s) for s in psi_entries)
    enlarged = ModelParams(
        coupling=params.coupling,
        half_width=params.half_width + r,
        phase=params.phase,
        alpha=params.alpha,
    )
    lw = enlarged.half_width
    psi = StateVector.from_sites(psi_entries, lw)
    phi = StateVector.from_sites(phi_entries, lw)
    lhs = phase_averaged_amplitude(psi, phi, [t], enlarged).values[0]
    rhs = 0.0 + 0.0j
    delta0 = StateVector.delta(0, lw)
    for site, value in sorted(psi_entries.items()):
        shifted = StateVector.from_sites(shift_state(phi_entries, site), lw)
        rhs += value * phase_averaged_amplitude(delta0, shifted, [t], enlarged).values[0]
    return float(abs(lhs - rhs))
