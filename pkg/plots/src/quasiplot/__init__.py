"""Batch figure rendering for quasispec artifacts.

Consumes the documented CSV/JSON schemas only; never imports the producing
package.
"""

from .cli import main
from .figures import (
    AxisOptions,
    FigureSpec,
    build_amplitude_figure,
    build_decay_figure,
    build_dos_figure,
    render,
)
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

__all__ = [
    "AxisOptions",
    "FigureSpec",
    "FitParams",
    "MeasureColumns",
    "SchemaError",
    "SeriesColumns",
    "build_amplitude_figure",
    "build_decay_figure",
    "build_dos_figure",
    "main",
    "read_amplitude",
    "read_fit",
    "read_measure",
    "read_trace",
    "render",
]
