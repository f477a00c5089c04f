"""Algebra of finite atomic measures on the real line.

Spectral measures of finite matrices, the density of states, and their
convolution powers are all finite sums of weighted point masses. This module
keeps that representation exact where it can (pairwise-sum convolution) and
grid-binned where it must (large convolution powers), and evaluates Fourier
transforms mu_hat(xi) = sum_j w_j exp(i xi x_j) by direct summation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.signal import fftconvolve

from .exceptions import CapExceededError, ConfigError

CONVOLVE_PRODUCT_CAP = 10**7

# Atoms below this fraction of the total mass are dropped; the discarded
# mass is tracked on the result so the approximation stays auditable.
PRUNE_REL_WEIGHT = 1e-15

# Above this operand size the binned convolution switches to FFT.
FFT_CONVOLVE_THRESHOLD = 4096

# Largest dense lattice the binned convolution will materialize.
BINNED_LATTICE_CAP = 2 * 10**7


@dataclass(frozen=True)
class AtomicMeasure:
    """Sorted nonnegative point masses; positions strictly increasing."""

    positions: np.ndarray
    weights: np.ndarray
    total_mass: float
    dropped_mass: float = 0.0

    def __len__(self) -> int:
        return len(self.positions)

    @property
    def atoms(self):
        return list(zip(self.positions.tolist(), self.weights.tolist()))


def from_atoms(
    positions,
    weights,
    coalesce_tol: float = 0.0,
    prune: bool = True,
    dropped_mass: float = 0.0,
) -> AtomicMeasure:
    """Sort, merge atoms closer than coalesce_tol, prune negligible weights.

    Merged atoms add their weights and sit at the weight-averaged position.
    """
    pos = np.asarray(positions, dtype=float).ravel()
    w = np.asarray(weights, dtype=float).ravel()
    if pos.shape != w.shape:
        raise ConfigError("positions and weights must have equal length")
    if len(pos) and float(np.min(w)) < 0.0:
        raise ConfigError("atomic measures need nonnegative weights")
    if len(pos) == 0:
        return AtomicMeasure(pos, w, 0.0, dropped_mass)
    order = np.argsort(pos, kind="stable")
    pos, w = pos[order], w[order]
    # cluster runs of nearly coincident positions
    starts = np.flatnonzero(np.concatenate([[True], np.diff(pos) > coalesce_tol]))
    if len(starts) < len(pos):
        sums = np.add.reduceat(w, starts)
        centers = np.add.reduceat(pos * w, starts)
        empty = sums <= 0.0
        # massless clusters keep their leftmost position
        centers = np.where(empty, pos[starts] * 1.0, centers / np.where(empty, 1.0, sums))
        pos, w = centers, sums
    mass = float(np.sum(w))
    if prune and len(pos):
        keep = (w > 0.0) & (w >= PRUNE_REL_WEIGHT * mass)
        dropped_mass += float(np.sum(w[~keep]))
        pos, w = pos[keep], w[keep]
    return AtomicMeasure(pos, w, float(np.sum(w)) + dropped_mass, dropped_mass)


def point_mass(position: float, weight: float = 1.0) -> AtomicMeasure:
    return from_atoms([position], [weight])


@dataclass(frozen=True)
class FourierTrace:
    """mu_hat sampled on a frequency grid; convention mu_hat(xi) = E[e^{i xi X}]."""

    xi_grid: np.ndarray
    values: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.xi_grid)

    def abs_values(self) -> np.ndarray:
        return np.abs(self.values)


def fourier(m: AtomicMeasure, xi_grid) -> FourierTrace:
    """Direct summation over atoms in ascending-position order.

    No fast transform: atom positions are irregular. Chunked over xi so the
    outer product stays within memory at large grids.
    """
    xi = np.asarray(xi_grid, dtype=float).ravel()
    if len(xi) > 1 and not np.all(np.diff(xi) > 0.0):
        raise ConfigError("frequency grid must be strictly increasing")
    vals = np.empty(len(xi), dtype=np.complex128)
    if len(m) == 0:
        vals[:] = 0.0
        return FourierTrace(xi, vals)
    chunk = max(1, int(4e6) // max(len(m), 1))
    for s in range(0, len(xi), chunk):
        block = xi[s : s + chunk]
        vals[s : s + chunk] = np.exp(1j * np.outer(block, m.positions)) @ m.weights
    return FourierTrace(xi, vals)


def convolve_exact(
    a: AtomicMeasure, b: AtomicMeasure, cap: int = CONVOLVE_PRODUCT_CAP
) -> AtomicMeasure:
    """All pairwise position sums with product weights, coalesced."""
    n = len(a) * len(b)
    if n > cap:
        raise CapExceededError(
            f"atom-count product {n} exceeds cap {cap}; use convolve_binned"
        )
    pos = (a.positions[:, None] + b.positions[None, :]).ravel()
    w = (a.weights[:, None] * b.weights[None, :]).ravel()
    return from_atoms(pos, w)


def _bin_to_lattice(m: AtomicMeasure, h: float) -> tuple[int, np.ndarray]:
    """Nearest-bin projection onto h*Z: returns (lowest index, weight array)."""
    idx = np.rint(m.positions / h).astype(np.int64)
    lo, hi = int(idx.min()), int(idx.max())
    n = hi - lo + 1
    if n > BINNED_LATTICE_CAP:
        raise CapExceededError(
            f"binned lattice needs {n} points at bin width {h} "
            f"(cap {BINNED_LATTICE_CAP}); increase the bin width"
        )
    w = np.zeros(n)
    np.add.at(w, idx - lo, m.weights)
    return lo, w


def _lattice_convolve(wa: np.ndarray, wb: np.ndarray) -> np.ndarray:
    n_out = len(wa) + len(wb) - 1
    if n_out > BINNED_LATTICE_CAP:
        raise CapExceededError(
            f"convolved lattice needs {n_out} points "
            f"(cap {BINNED_LATTICE_CAP}); increase the bin width"
        )
    if max(len(wa), len(wb)) > FFT_CONVOLVE_THRESHOLD:
        out = fftconvolve(wa, wb)
        # FFT roundoff can leave tiny negative weights
        np.clip(out, 0.0, None, out=out)
        return out
    return np.convolve(wa, wb)


def convolve_binned(a: AtomicMeasure, b: AtomicMeasure, h: float) -> AtomicMeasure:
    """Bin both operands to the lattice h*Z, then convolve discretely.

    Mass is preserved; each output position is off by at most h from the
    corresponding exact sum (h/2 from each operand's binning).
    """
    if h <= 0.0:
        raise ConfigError(f"bin width must be positive, got {h}")
    if len(a) == 0 or len(b) == 0:
        return from_atoms([], [])
    lo_a, wa = _bin_to_lattice(a, h)
    lo_b, wb = _bin_to_lattice(b, h)
    w = _lattice_convolve(wa, wb)
    idx = np.arange(len(w)) + lo_a + lo_b
    keep = w > 0.0
    return from_atoms(idx[keep] * h, w[keep])


def convolution_power(
    m: AtomicMeasure,
    n: int,
    mode: str = "exact",
    h: float | None = None,
    cap: int = CONVOLVE_PRODUCT_CAP,
) -> AtomicMeasure:
    """N-fold self-convolution via repeated squaring.

    Binned mode projects onto h*Z once and squares on the integer lattice, so
    no re-binning error accumulates beyond the initial projection.
    """
    if n < 1 or int(n) != n:
        raise ConfigError(f"power must be a positive integer, got {n}")
    if mode == "exact":
        result: AtomicMeasure | None = None
        square = m
        k = int(n)
        while k:
            if k & 1:
                result = square if result is None else convolve_exact(result, square, cap)
            k >>= 1
            if k:
                square = convolve_exact(square, square, cap)
        return result
    if mode == "binned":
        if h is None:
            raise ConfigError("binned mode needs a bin width h")
        if h <= 0.0:
            raise ConfigError(f"bin width must be positive, got {h}")
        lo, w = _bin_to_lattice(m, h)
        res_lo, res_w = None, None
        sq_lo, sq_w = lo, w
        k = int(n)
        while k:
            if k & 1:
                if res_w is None:
                    res_lo, res_w = sq_lo, sq_w
                else:
                    res_w = _lattice_convolve(res_w, sq_w)
                    res_lo += sq_lo
            k >>= 1
            if k:
                sq_w = _lattice_convolve(sq_w, sq_w)
                sq_lo *= 2
        idx = np.arange(len(res_w)) + res_lo
        keep = res_w > 0.0
        return from_atoms(idx[keep] * h, res_w[keep])
    raise ConfigError(f"unknown convolution mode {mode!r}")


def tv_distance(a: AtomicMeasure, b: AtomicMeasure, position_tol: float = 1e-9) -> float:
    """Total-variation distance treating atoms within position_tol as shared.

    Clusters the union of atom positions (gaps > position_tol start a new
    cluster) and sums half the absolute weight differences per cluster.
    """
    pos = np.concatenate([a.positions, b.positions])
    signed = np.concatenate([a.weights, -b.weights])
    if len(pos) == 0:
        return 0.0
    order = np.argsort(pos, kind="stable")
    pos, signed = pos[order], signed[order]
    starts = np.flatnonzero(np.concatenate([[True], np.diff(pos) > position_tol]))
    sums = np.add.reduceat(signed, starts)
    return 0.5 * float(np.sum(np.abs(sums)))
