"""Runtime-scaling figures for qspf benchmark CSVs.

Input contract (produced by `qspf bench` and the acceptance benchmark):

    # schema=1
    method,d,eta,wall_ms,residual,iterations,seed,grid_size
    ffpi,1024,0.5,171.2,...

This package reads such files, takes the median wall time per (method, d),
fits a log-log slope, and renders the scatter plus fit.  Nothing here
imports the solver package; the CSV is the interface.
"""

from .core import (
    BenchRow,
    EmptyDataError,
    FiguresError,
    MissingMethodError,
    SchemaError,
    fit_slope,
    median_series,
    read_bench_csv,
    render_scaling_figure,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "BenchRow",
    "FiguresError",
    "SchemaError",
    "MissingMethodError",
    "EmptyDataError",
    "read_bench_csv",
    "median_series",
    "fit_slope",
    "render_scaling_figure",
]
