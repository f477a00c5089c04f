"""Figure builders and the render entry point.

Rendering never alters or reinterprets the numbers: the decay overlay is
drawn from the slope stored in the fit JSON, never refitted from the trace,
and the plotted series are the artifact columns as read. Figures are batch
artifacts (Agg backend, one image per call).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .schemas import (
    FitParams,
    MeasureColumns,
    SchemaError,
    SeriesColumns,
    read_amplitude,
    read_fit,
    read_measure,
    read_trace,
)

REQUIRED_INPUTS = {
    "decay": ("trace", "fit"),
    "amplitude": ("series",),
    "dos": ("measure",),
}

OVERLAY_POINTS = 64

FIGSIZE = (6.4, 4.4)


@dataclass(frozen=True)
class AxisOptions:
    title: str | None = None
    xlim: tuple[float, float] | None = None
    ylim: tuple[float, float] | None = None


@dataclass(frozen=True)
class FigureSpec:
    """One batch figure: artifact inputs, figure kind, output image path."""

    kind: str
    inputs: dict[str, Path]
    output: Path
    axes: AxisOptions = field(default_factory=AxisOptions)


def _finish(ax, options: AxisOptions) -> None:
    if options.title:
        ax.set_title(options.title)
    if options.xlim:
        ax.set_xlim(*options.xlim)
    if options.ylim:
        ax.set_ylim(*options.ylim)


def build_decay_figure(trace: SeriesColumns, fit: FitParams, options: AxisOptions = AxisOptions()):
    """Log-log |mu_hat(xi)| with the stored power law overlaid on its window."""
    fig, ax = plt.subplots(figsize=FIGSIZE)
    mask = (trace.x > 0.0) & (trace.magnitude > 0.0)
    ax.loglog(trace.x[mask], trace.magnitude[mask], lw=0.6, color="tab:blue",
              label="trace")
    lo, hi = fit.window
    x = np.geomspace(lo, hi, OVERLAY_POINTS)
    ax.loglog(x, np.exp(fit.intercept) * x ** -fit.epsilon, lw=1.8, color="tab:red",
              label=f"slope -{fit.epsilon:.4f}")
    ax.set_xlabel(r"$\xi$")
    ax.set_ylabel(r"$|\hat\mu(\xi)|$")
    ax.legend()
    _finish(ax, options)
    return fig, ax


def build_amplitude_figure(series: SeriesColumns, options: AxisOptions = AxisOptions()):
    """Log-log |A(t)| over the positive part of the time grid."""
    fig, ax = plt.subplots(figsize=FIGSIZE)
    mask = (series.x > 0.0) & (series.magnitude > 0.0)
    ax.loglog(series.x[mask], series.magnitude[mask], lw=0.9, color="tab:green")
    ax.set_xlabel(r"$t$")
    ax.set_ylabel(r"$|A(t)|$")
    _finish(ax, options)
    return fig, ax


def build_dos_figure(measure: MeasureColumns, options: AxisOptions = AxisOptions()):
    """Bar chart of atom weights against their energies."""
    fig, ax = plt.subplots(figsize=FIGSIZE)
    pos = measure.positions
    if len(pos) > 1:
        width = 0.8 * float(np.min(np.diff(np.sort(pos))))
    else:
        width = 0.1
    ax.bar(pos, measure.weights, width=width, color="tab:purple")
    ax.set_xlabel("energy")
    ax.set_ylabel("weight")
    _finish(ax, options)
    return fig, ax


def render(spec: FigureSpec) -> Path:
    """Validate inputs, build the figure for spec.kind, write spec.output."""
    if spec.kind not in REQUIRED_INPUTS:
        raise SchemaError(
            f"unknown figure kind '{spec.kind}' (expected one of {sorted(REQUIRED_INPUTS)})"
        )
    needed = REQUIRED_INPUTS[spec.kind]
    missing = [name for name in needed if name not in spec.inputs]
    if missing:
        raise SchemaError(f"figure kind '{spec.kind}' needs inputs {list(needed)}, missing {missing}")
    if spec.kind == "decay":
        trace = read_trace(spec.inputs["trace"])
        if not np.any((trace.x > 0.0) & (trace.magnitude > 0.0)):
            raise SchemaError(f"{spec.inputs['trace']}: nothing to draw on log axes")
        fig, _ = build_decay_figure(trace, read_fit(spec.inputs["fit"]), spec.axes)
    elif spec.kind == "amplitude":
        series = read_amplitude(spec.inputs["series"])
        if not np.any((series.x > 0.0) & (series.magnitude > 0.0)):
            raise SchemaError(f"{spec.inputs['series']}: nothing to draw on log axes")
        fig, _ = build_amplitude_figure(series, spec.axes)
    else:
        fig, _ = build_dos_figure(read_measure(spec.inputs["measure"]), spec.axes)
    out = Path(spec.output)
    try:
        fig.savefig(out)
    finally:
        plt.close(fig)
    return out
