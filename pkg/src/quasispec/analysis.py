"""Decay-exponent estimation and the L^2 criterion for convolution powers.

|mu_hat| oscillates, so the power-law bound |mu_hat(xi)| <= xi^{-eps} is an
envelope statement: partition the frequency grid into log-uniform blocks,
take the block maxima, and fit log(max) against log(xi) by ordinary least
squares. A fitted eps > 0 feeds the power counter: mu_hat^N is square
integrable once N*eps > 1/2, and the partial integrals of |mu_hat|^{2N}
plateauing with the cutoff is the checkable form of that statement.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import ConfigError, NumericalError
from .measures import FourierTrace

BLOCKS_PER_DECADE_DEFAULT = 8

# the power-law bound is asymptotic; the first decade is transient
FIT_WINDOW_MIN_DEFAULT = 10.0

MIN_FIT_BLOCKS = 4


def envelope(trace: FourierTrace, blocks_per_decade: int = BLOCKS_PER_DECADE_DEFAULT):
    """Block maxima of |mu_hat| over log-uniform frequency blocks.

    Returns (block centers, maxima) with empty blocks dropped; centers are
    the geometric means of the block edges. A grid point equal to an interior
    edge belongs to the block it left-bounds.
    """
    if blocks_per_decade < 1:
        raise ConfigError(f"blocks_per_decade must be >= 1, got {blocks_per_decade}")
    xi = trace.xi_grid
    if len(xi) < 2:
        raise ConfigError("grid too short: need at least two frequencies")
    if xi[0] <= 0.0:
        raise ConfigError("envelope needs strictly positive frequencies")
    lo, hi = np.log10(xi[0]), np.log10(xi[-1])
    if hi - lo < 1.0:
        raise ConfigError("grid too short: must cover at least one decade")
    n_blocks = int(np.ceil((hi - lo) * blocks_per_decade))
    edges = np.logspace(lo, hi, n_blocks + 1)
    idx = np.searchsorted(edges, xi, side="right") - 1
    np.clip(idx, 0, n_blocks - 1, out=idx)
    vals = trace.abs_values()
    centers, maxima = [], []
    for b in range(n_blocks):
        mask = idx == b
        if np.any(mask):
            centers.append(float(np.sqrt(edges[b] * edges[b + 1])))
            maxima.append(float(np.max(vals[mask])))
    return np.asarray(centers), np.asarray(maxima)


@dataclass(frozen=True)
class DecayFit:
    """OLS fit of log(envelope) vs log(xi): |mu_hat(xi)| ~ C * xi^{-epsilon}."""

    epsilon: float
    intercept: float
    stderr: float
    fit_window: tuple[float, float]
    block_centers: np.ndarray = field(repr=False)
    block_maxima: np.ndarray = field(repr=False)


def fit_decay(block_centers, block_maxima, fit_window: tuple[float, float] | None = None) -> DecayFit:
    """Ordinary least squares on the stored block maxima; epsilon = -slope.

    Refitting a DecayFit's own block_maxima reproduces its epsilon exactly:
    the estimator is a deterministic function of the blocks.
    """
    cx = np.asarray(block_centers, dtype=float)
    cy = np.asarray(block_maxima, dtype=float)
    if cx.shape != cy.shape:
        raise ConfigError("block centers and maxima must have equal length")
    if len(cx) < MIN_FIT_BLOCKS:
        raise ConfigError(f"need at least {MIN_FIT_BLOCKS} blocks, got {len(cx)}")
    if np.min(cx) <= 0.0 or np.min(cy) <= 0.0:
        raise ConfigError("blocks must have positive centers and positive maxima")
    lx = np.log(cx)
    ly = np.log(cy)
    if float(np.max(lx) - np.min(lx)) == 0.0:
        raise ConfigError("degenerate fit window: all block centers equal")
    xc = lx - lx.mean()
    sxx = float(xc @ xc)
    slope = float(xc @ ly) / sxx
    intercept = float(ly.mean() - slope * lx.mean())
    resid = ly - (intercept + slope * lx)
    stderr = float(np.sqrt((resid @ resid) / (len(lx) - 2) / sxx))
    if fit_window is None:
        fit_window = (float(cx[0]), float(cx[-1]))
    return DecayFit(
        epsilon=-slope,
        intercept=intercept,
        stderr=stderr,
        fit_window=fit_window,
        block_centers=cx,
        block_maxima=cy,
    )


def decay_pipeline(
    trace: FourierTrace,
    blocks_per_decade: int = BLOCKS_PER_DECADE_DEFAULT,
    window: tuple[float, float | None] = (FIT_WINDOW_MIN_DEFAULT, None),
) -> DecayFit:
    """Window the trace, take block maxima, fit: the standard decay readout."""
    lo = window[0]
    hi = window[1] if window[1] is not None else float(trace.xi_grid[-1])
    mask = (trace.xi_grid >= lo) & (trace.xi_grid <= hi)
    if not np.any(mask):
        raise ConfigError(f"fit window [{lo}, {hi}] contains no grid points")
    sub = FourierTrace(trace.xi_grid[mask], trace.values[mask])
    centers, maxima = envelope(sub, blocks_per_decade)
    return fit_decay(centers, maxima, fit_window=(lo, hi))


def min_power_for_l2(epsilon: float) -> int:
    """Smallest integer N with N*epsilon > 1/2 (so mu_hat^N is in L^2)."""
    if epsilon <= 0.0:
        raise NumericalError(f"no finite power certified for epsilon = {epsilon}")
    return int(np.floor(1.0 / (2.0 * epsilon))) + 1


def l2_growth_diagnostic(trace: FourierTrace, n_power: int, cutoffs) -> list[float]:
    """Partial integrals of |mu_hat|^{2N} over [-Xi, Xi] for each cutoff.

    Trapezoid rule with an interpolated endpoint at each cutoff; the measure
    is real, so |mu_hat(-xi)| = |mu_hat(xi)| and the integral doubles the
    [grid start, Xi] part. A plateauing sequence is evidence of square
    integrability; the sequence is monotone nondecreasing by construction.
    """
    if n_power < 1 or int(n_power) != n_power:
        raise ConfigError(f"power must be a positive integer, got {n_power}")
    cuts = np.asarray(cutoffs, dtype=float).ravel()
    if len(cuts) == 0 or (len(cuts) > 1 and not np.all(np.diff(cuts) > 0.0)):
        raise ConfigError("cutoffs must be a nonempty increasing list")
    xi = trace.xi_grid
    if cuts[0] < xi[0] or cuts[-1] > xi[-1]:
        raise ConfigError(
            f"cutoffs must lie within the sampled grid [{xi[0]}, {xi[-1]}]"
        )
    y = trace.abs_values() ** (2 * n_power)
    out = []
    for cut in cuts:
        j = int(np.searchsorted(xi, cut, side="right"))
        part = float(np.trapezoid(y[:j], xi[:j]))
        if xi[j - 1] < cut:
            # close the strip up to the cutoff with an interpolated value
            frac_step = (cut - xi[j - 1]) / (xi[j] - xi[j - 1])
            y_cut = y[j - 1] + frac_step * (y[j] - y[j - 1])
            part += 0.5 * (y[j - 1] + y_cut) * (cut - xi[j - 1])
        out.append(2.0 * part)
    return out
