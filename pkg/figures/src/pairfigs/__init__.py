"""Plotting package for the pair-production simulator's CSV outputs."""

from .csvio import FigureInputError, read_csv, read_spectrum, read_summary
from .plots import (PlotSpec, build_spectra_figure, build_yield_figure,
                    plot_spectra, plot_yield)

__version__ = "0.1.0"

__all__ = [
    "FigureInputError",
    "PlotSpec",
    "build_spectra_figure",
    "build_yield_figure",
    "plot_spectra",
    "plot_yield",
    "read_csv",
    "read_spectrum",
    "read_summary",
    "__version__",
]
